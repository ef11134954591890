#pragma once

#include <stdexcept>
#include <string>

namespace fable {

enum class Errc {
  missing_list,
  empty_entry,
  duplicate_entry,
  exhausted_space,
  infeasible_constraints,
  index_out_of_range,
  transport_error,
  endpoint_error,
  malformed_response,
  timeout,
  io_error,
  schema_violation,
  empty_corpus,
  empty_candidate,
  no_references,
  corpus_too_small,
  unparseable_reply,
  judge_unavailable,
  too_few_values,
  invalid_input,
};

const char* errc_name(Errc code);

/// Every failure surfaced by the pipeline carries one Errc plus a message
/// naming the offending input (list, index, path, endpoint, ...).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::missing_list: return "MissingList";
    case Errc::empty_entry: return "EmptyEntry";
    case Errc::duplicate_entry: return "DuplicateEntry";
    case Errc::exhausted_space: return "ExhaustedSpace";
    case Errc::infeasible_constraints: return "InfeasibleConstraints";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::transport_error: return "TransportError";
    case Errc::endpoint_error: return "EndpointError";
    case Errc::malformed_response: return "MalformedResponse";
    case Errc::timeout: return "Timeout";
    case Errc::io_error: return "IoError";
    case Errc::schema_violation: return "SchemaViolation";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::empty_candidate: return "EmptyCandidate";
    case Errc::no_references: return "NoReferences";
    case Errc::corpus_too_small: return "CorpusTooSmall";
    case Errc::unparseable_reply: return "UnparseableReply";
    case Errc::judge_unavailable: return "JudgeUnavailable";
    case Errc::too_few_values: return "TooFewValues";
    case Errc::invalid_input: return "InvalidInput";
  }
  return "UnknownError";
}

}  // namespace fable
