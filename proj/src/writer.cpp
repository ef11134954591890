#include "fable/writer.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fable/error.hpp"

namespace fable::corpus {
namespace {

constexpr const char* kManifestName = "manifest.json";

void write_text_atomic(const std::filesystem::path& target, const std::string& content) {
  const auto tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw Error(Errc::io_error, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error(Errc::io_error, "cannot move " + tmp + " into place: " + ec.message());
}

}  // namespace

std::int64_t Manifest::total_records() const {
  std::int64_t total = 0;
  for (const auto& file : files) total += file.records;
  return total;
}

std::string chunk_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "part-%05zu.jsonl", index);
  return buf;
}

void save_manifest(const Manifest& manifest, const std::filesystem::path& out_dir) {
  nlohmann::json doc;
  doc["chunk_size"] = manifest.chunk_size;
  doc["pipeline_version"] = manifest.pipeline_version;
  doc["completed"] = manifest.completed;
  doc["total_records"] = manifest.total_records();
  auto& files = doc["files"] = nlohmann::json::array();
  for (const auto& file : manifest.files) {
    files.push_back({{"name", file.name}, {"records", file.records}});
  }
  write_text_atomic(out_dir / kManifestName, doc.dump(2) + "\n");
}

bool manifest_exists(const std::filesystem::path& out_dir) {
  return std::filesystem::exists(out_dir / kManifestName);
}

Manifest load_manifest(const std::filesystem::path& out_dir) {
  const auto path = out_dir / kManifestName;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(Errc::schema_violation, path.string() + " is not a JSON object");
  }
  Manifest manifest;
  try {
    manifest.chunk_size = doc.at("chunk_size").get<std::int64_t>();
    manifest.pipeline_version = doc.at("pipeline_version").get<std::string>();
    manifest.completed = doc.at("completed").get<bool>();
    for (const auto& file : doc.at("files")) {
      manifest.files.push_back(
          {file.at("name").get<std::string>(), file.at("records").get<std::int64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema_violation, path.string() + ": " + e.what());
  }
  if (manifest.chunk_size < 1) {
    throw Error(Errc::schema_violation, path.string() + ": chunk_size must be >= 1");
  }
  return manifest;
}

std::unordered_set<std::string> collect_hashes(const std::filesystem::path& out_dir,
                                               const Manifest& manifest) {
  std::unordered_set<std::string> hashes;
  for (const auto& file : manifest.files) {
    const auto path = out_dir / file.name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "manifest names missing chunk " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      hashes.insert(parse_record(line).hash);
    }
  }
  return hashes;
}

ChunkedWriter::ChunkedWriter(std::filesystem::path out_dir, std::int64_t chunk_size,
                             std::string pipeline_version)
    : out_dir_(std::move(out_dir)) {
  if (chunk_size < 1) throw Error(Errc::invalid_input, "chunk_size must be >= 1");
  std::filesystem::create_directories(out_dir_);
  if (manifest_exists(out_dir_)) {
    manifest_ = load_manifest(out_dir_);
    if (manifest_.chunk_size != chunk_size) {
      throw Error(Errc::invalid_input,
                  "existing manifest uses chunk_size " + std::to_string(manifest_.chunk_size) +
                      ", requested " + std::to_string(chunk_size));
    }
    manifest_.pipeline_version = std::move(pipeline_version);
  } else {
    manifest_.chunk_size = chunk_size;
    manifest_.pipeline_version = std::move(pipeline_version);
    save_manifest(manifest_, out_dir_);
  }
}

void ChunkedWriter::append_chunk(const std::vector<FableRecord>& records) {
  if (records.empty()) return;
  if (static_cast<std::int64_t>(records.size()) > manifest_.chunk_size) {
    throw Error(Errc::invalid_input, "chunk holds more records than chunk_size");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      validate_record(records[i]);
    } catch (const Error& e) {
      throw Error(Errc::schema_violation,
                  "record " + std::to_string(i) + ": " + e.what());
    }
  }
  const auto name = chunk_file_name(manifest_.files.size());
  const auto path = out_dir_ / name;
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
    std::string buffer;
    for (const auto& record : records) {
      buffer += to_jsonl(record);
      buffer.push_back('\n');
      if (buffer.size() > (1u << 20)) {
        out << buffer;
        buffer.clear();
      }
    }
    out << buffer;
    if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
  }
  manifest_.files.push_back({name, static_cast<std::int64_t>(records.size())});
  save_manifest(manifest_, out_dir_);
}

void ChunkedWriter::finalize() {
  manifest_.completed = true;
  save_manifest(manifest_, out_dir_);
}

Manifest write_records(const std::function<std::optional<FableRecord>()>& next,
                       std::int64_t chunk_size, const std::filesystem::path& out_dir) {
  // The manifest takes its version from the records it holds.
  std::optional<ChunkedWriter> writer;
  std::vector<FableRecord> chunk;
  chunk.reserve(static_cast<std::size_t>(chunk_size));
  std::int64_t index = 0;
  while (auto record = next()) {
    try {
      validate_record(*record);
    } catch (const Error& e) {
      throw Error(Errc::schema_violation, "record " + std::to_string(index) + ": " + e.what());
    }
    if (!writer) writer.emplace(out_dir, chunk_size, record->pipeline_version);
    chunk.push_back(std::move(*record));
    index += 1;
    if (static_cast<std::int64_t>(chunk.size()) == chunk_size) {
      writer->append_chunk(chunk);
      chunk.clear();
    }
  }
  if (!writer) writer.emplace(out_dir, chunk_size, "");
  writer->append_chunk(chunk);
  writer->finalize();
  return writer->manifest();
}

Manifest write_records(const std::vector<FableRecord>& records, std::int64_t chunk_size,
                       const std::filesystem::path& out_dir) {
  std::size_t i = 0;
  return write_records(
      [&]() -> std::optional<FableRecord> {
        if (i == records.size()) return std::nullopt;
        return records[i++];
      },
      chunk_size, out_dir);
}

}  // namespace fable::corpus
