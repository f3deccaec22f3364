// Copyright 2026 The Scenetext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded shuffle and round-robin sharding of JSONL examples.
//
// The permutation is the sort order of (KeyedHash64(seed, example_id),
// example_id), so it depends only on the set of examples. Buffers that
// exceed the memory budget are sorted and spilled to run files, then
// merged; output is identical whether or not anything was spilled.

#ifndef SCENETEXT_SHARD_WRITER_H_
#define SCENETEXT_SHARD_WRITER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scenetext {

struct ShardFile {
  std::string path;  // relative to the output root
  std::size_t examples = 0;
  std::uint64_t bytes = 0;
  std::string blake2b;  // digest of the file bytes as written
};

struct ShardOptions {
  std::size_t shard_count = 1;
  bool compress = false;  // gzip, deterministic header
  std::size_t spill_bytes = std::size_t{256} << 20;
};

// "<stem>-00003-of-00008.jsonl" (+ ".gz").
std::string ShardFileName(std::string_view stem, std::size_t index,
                          std::size_t count, bool compress);

class ShardBuilder {
 public:
  // Shards land in root / relative_dir; run files go to a private
  // subdirectory of spill_root and are removed by Finish().
  ShardBuilder(std::uint64_t seed, std::filesystem::path root,
               std::string relative_dir, std::string stem,
               std::filesystem::path spill_root, ShardOptions options);
  ~ShardBuilder();
  ShardBuilder(const ShardBuilder&) = delete;
  ShardBuilder& operator=(const ShardBuilder&) = delete;

  void Add(std::string example_id, std::string line);
  std::size_t size() const { return added_; }
  std::size_t spilled_runs() const { return runs_.size(); }

  std::vector<ShardFile> Finish();

 private:
  struct Entry {
    std::uint64_t key;
    std::string id;
    std::string line;
  };

  void Spill();

  std::uint64_t seed_;
  std::filesystem::path root_;
  std::string relative_dir_;
  std::string stem_;
  std::filesystem::path spill_dir_;
  ShardOptions options_;
  std::vector<Entry> buffer_;
  std::size_t buffer_bytes_ = 0;
  std::size_t added_ = 0;
  std::vector<std::filesystem::path> runs_;
  bool finished_ = false;
};

// Convenience wrapper over ShardBuilder for in-memory inputs: pairs of
// (example_id, jsonl line).
std::vector<ShardFile> ShuffleAndShard(
    std::span<const std::pair<std::string, std::string>> examples,
    std::uint64_t seed, const std::filesystem::path& root,
    const std::string& relative_dir, const std::string& stem,
    const ShardOptions& options);

// Reads a shard back (decompressing .gz) as lines.
std::vector<std::string> ReadShardLines(const std::filesystem::path& path);

}  // namespace scenetext

#endif  // SCENETEXT_SHARD_WRITER_H_
