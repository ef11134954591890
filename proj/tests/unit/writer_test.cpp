#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fable/error.hpp"
#include "fable/record.hpp"
#include "fable/sha256.hpp"
#include "fable/writer.hpp"
#include "support/temp_dir.hpp"

using namespace fable;
using namespace fable::corpus;
using fable::testing::TempDir;

namespace {

FableRecord stub_record(int i) {
  FableRecord r;
  r.prompt = "prompt number " + std::to_string(i);
  r.fable = "fable number " + std::to_string(i);
  r.hash = sha256_hex(r.prompt);
  r.llm_name = "stub";
  r.llm_input_tokens = 10 + i;
  r.llm_output_tokens = 20 + i;
  r.llm_inference_time = 0.5;
  r.host_provider = "local";
  r.host_dc_provider = "none";
  r.host_dc_location = "here";
  r.host_gpu = "cpu";
  r.host_gpu_vram = "0";
  r.host_cost_per_hour = 0.0;
  r.generation_datetime = "2026-08-16T00:00:00Z";
  r.pipeline_version = "0.1.0";
  return r;
}

std::vector<FableRecord> stub_records(int count) {
  std::vector<FableRecord> out;
  for (int i = 0; i < count; ++i) out.push_back(stub_record(i));
  return out;
}

std::vector<std::string> lines_of(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("write_records splits into fixed-size chunks") {
  TempDir dir;
  const auto manifest = write_records(stub_records(5), 2, dir.path);
  CHECK(manifest.chunk_size == 2);
  CHECK(manifest.completed);
  CHECK(manifest.total_records() == 5);
  REQUIRE(manifest.files.size() == 3);
  CHECK(manifest.files[0].name == "part-00000.jsonl");
  CHECK(manifest.files[0].records == 2);
  CHECK(manifest.files[1].records == 2);
  CHECK(manifest.files[2].name == "part-00002.jsonl");
  CHECK(manifest.files[2].records == 1);

  CHECK(lines_of(dir.path / "part-00000.jsonl").size() == 2);
  CHECK(lines_of(dir.path / "part-00002.jsonl").size() == 1);

  // Every line parses back to the record that went in.
  const auto all = stub_records(5);
  std::size_t next = 0;
  for (const auto& info : manifest.files) {
    for (const auto& line : lines_of(dir.path / info.name)) {
      CHECK(parse_record(line) == all[next]);
      ++next;
    }
  }
  CHECK(next == 5);
}

TEST_CASE("a single record makes a single one-line chunk") {
  TempDir dir;
  const auto manifest = write_records(stub_records(1), 100, dir.path);
  REQUIRE(manifest.files.size() == 1);
  CHECK(manifest.files[0].records == 1);
  const auto lines = lines_of(dir.path / manifest.files[0].name);
  REQUIRE(lines.size() == 1);
  CHECK(parse_record(lines[0]) == stub_record(0));
}

TEST_CASE("the pull producer drains until nullopt") {
  TempDir dir;
  int next = 0;
  const auto manifest = write_records(
      [&]() -> std::optional<FableRecord> {
        if (next >= 7) return std::nullopt;
        return stub_record(next++);
      },
      3, dir.path);
  CHECK(manifest.total_records() == 7);
  REQUIRE(manifest.files.size() == 3);
  CHECK(manifest.files[2].records == 1);
}

TEST_CASE("manifest round-trips through disk") {
  TempDir dir;
  write_records(stub_records(4), 2, dir.path);
  CHECK(manifest_exists(dir.path));
  const auto manifest = load_manifest(dir.path);
  CHECK(manifest.chunk_size == 2);
  CHECK(manifest.pipeline_version == "0.1.0");
  CHECK(manifest.completed);
  CHECK(manifest.total_records() == 4);
  CHECK_FALSE(manifest_exists(dir.path / "nowhere"));
}

TEST_CASE("collect_hashes returns every stored hash") {
  TempDir dir;
  const auto manifest = write_records(stub_records(5), 2, dir.path);
  const auto hashes = collect_hashes(dir.path, manifest);
  CHECK(hashes.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(hashes.count(sha256_hex("prompt number " + std::to_string(i))) == 1);
  }
}

TEST_CASE("a writer resumes an interrupted run") {
  TempDir dir;
  {
    ChunkedWriter writer(dir.path, 2, "0.1.0");
    writer.append_chunk({stub_record(0), stub_record(1)});
    // No finalize: simulates an interrupt after one chunk.
  }
  const auto partial = load_manifest(dir.path);
  CHECK_FALSE(partial.completed);
  CHECK(partial.total_records() == 2);

  {
    ChunkedWriter writer(dir.path, 2, "0.1.0");
    CHECK(writer.manifest().total_records() == 2);
    writer.append_chunk({stub_record(2), stub_record(3)});
    writer.finalize();
  }
  const auto finished = load_manifest(dir.path);
  CHECK(finished.completed);
  CHECK(finished.total_records() == 4);
  REQUIRE(finished.files.size() == 2);
  CHECK(finished.files[1].name == "part-00001.jsonl");
}

TEST_CASE("a writer rejects a mismatched chunk size on resume") {
  TempDir dir;
  {
    ChunkedWriter writer(dir.path, 2, "0.1.0");
    writer.append_chunk({stub_record(0)});
  }
  CHECK_THROWS_AS(ChunkedWriter(dir.path, 3, "0.1.0"), Error);
}

TEST_CASE("an invalid record aborts the chunk before anything is written") {
  TempDir dir;
  ChunkedWriter writer(dir.path, 10, "0.1.0");
  auto records = stub_records(3);
  records[2].hash = sha256_hex("wrong");
  try {
    writer.append_chunk(records);
    FAIL("expected SchemaViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_violation);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK(writer.manifest().files.empty());
  CHECK_FALSE(std::filesystem::exists(dir.path / "part-00000.jsonl"));
}

TEST_CASE("chunk file names are zero-padded") {
  CHECK(chunk_file_name(0) == "part-00000.jsonl");
  CHECK(chunk_file_name(29) == "part-00029.jsonl");
  CHECK(chunk_file_name(123456) == "part-123456.jsonl");
}

TEST_CASE("loading a manifest from an empty directory fails cleanly") {
  TempDir dir;
  try {
    load_manifest(dir.path);
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_error);
  }
}
