#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "fable/record.hpp"

namespace fable::corpus {

struct ChunkInfo {
  std::string name;
  std::int64_t records = 0;
};

struct Manifest {
  std::int64_t chunk_size = 0;
  std::string pipeline_version;
  bool completed = false;
  std::vector<ChunkInfo> files;

  std::int64_t total_records() const;
};

std::string chunk_file_name(std::size_t index);

void save_manifest(const Manifest& manifest, const std::filesystem::path& out_dir);
Manifest load_manifest(const std::filesystem::path& out_dir);
bool manifest_exists(const std::filesystem::path& out_dir);

/// Hashes of every record already on disk, read back through the manifest's
/// chunk list. Used to resume interrupted runs without regenerating.
std::unordered_set<std::string> collect_hashes(const std::filesystem::path& out_dir,
                                               const Manifest& manifest);

/// Appends whole chunks to an output directory and keeps the manifest in
/// step. A chunk and the manifest are only written after every record in the
/// chunk validated, so a crash never leaves a half-counted chunk behind.
class ChunkedWriter {
 public:
  ChunkedWriter(std::filesystem::path out_dir, std::int64_t chunk_size,
                std::string pipeline_version);

  /// Writes the next part file. Records are validated first; a failing
  /// record raises SchemaViolation naming its index within the chunk.
  void append_chunk(const std::vector<FableRecord>& records);

  /// Marks the manifest completed and saves it.
  void finalize();

  const Manifest& manifest() const { return manifest_; }

 private:
  std::filesystem::path out_dir_;
  Manifest manifest_;
};

/// Pull-based bulk writer: drains the producer until it returns nullopt,
/// writing chunks of exactly chunk_size (the last may be short). Returns the
/// completed manifest.
Manifest write_records(const std::function<std::optional<FableRecord>()>& next,
                       std::int64_t chunk_size, const std::filesystem::path& out_dir);

Manifest write_records(const std::vector<FableRecord>& records, std::int64_t chunk_size,
                       const std::filesystem::path& out_dir);

}  // namespace fable::corpus
