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

#include "scenetext/shard_writer.h"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <queue>
#include <stdexcept>
#include <system_error>
#include <tuple>

#include "scenetext/hashing.h"

namespace scenetext {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void IoFail(const std::string& what, const fs::path& path) {
  throw std::runtime_error(what + ": " + path.string());
}

// One output shard. Digest and byte count cover the bytes on disk.
class ShardSink {
 public:
  ShardSink(const fs::path& path, bool compress)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc),
        compress_(compress) {
    if (!out_) IoFail("cannot create shard", path);
    if (compress_) {
      zs_ = std::make_unique<z_stream>();
      // windowBits 15 + 16 selects the gzip wrapper; the header carries no
      // name and a zero mtime, so output is reproducible.
      if (deflateInit2(zs_.get(), Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                       Z_DEFAULT_STRATEGY) != Z_OK) {
        throw std::runtime_error("deflateInit2 failed");
      }
    }
  }

  ~ShardSink() {
    if (zs_) deflateEnd(zs_.get());
  }

  void WriteLine(std::string_view line) {
    Write(line);
    Write("\n");
    ++lines_;
  }

  ShardFile Close(std::string relative_path) {
    if (compress_) Deflate(nullptr, 0, Z_FINISH);
    out_.flush();
    if (!out_) IoFail("write failed", path_);
    out_.close();
    ShardFile f;
    f.path = std::move(relative_path);
    f.examples = lines_;
    f.bytes = bytes_;
    f.blake2b = digest_.HexFinal();
    return f;
  }

 private:
  void Write(std::string_view data) {
    if (compress_) {
      Deflate(data.data(), data.size(), Z_NO_FLUSH);
    } else {
      Emit(data.data(), data.size());
    }
  }

  void Emit(const char* data, std::size_t n) {
    out_.write(data, static_cast<std::streamsize>(n));
    if (!out_) IoFail("write failed", path_);
    digest_.Update(std::string_view(data, n));
    bytes_ += n;
  }

  void Deflate(const char* data, std::size_t n, int flush) {
    std::array<unsigned char, 1 << 15> buf;
    zs_->next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data));
    zs_->avail_in = static_cast<uInt>(n);
    int rc;
    do {
      zs_->next_out = buf.data();
      zs_->avail_out = static_cast<uInt>(buf.size());
      rc = deflate(zs_.get(), flush);
      if (rc == Z_STREAM_ERROR) throw std::runtime_error("deflate failed");
      Emit(reinterpret_cast<const char*>(buf.data()),
           buf.size() - zs_->avail_out);
    } while (zs_->avail_out == 0 || (flush == Z_FINISH && rc != Z_STREAM_END));
  }

  fs::path path_;
  std::ofstream out_;
  bool compress_;
  std::unique_ptr<z_stream> zs_;
  ContentDigest digest_;
  std::size_t lines_ = 0;
  std::uint64_t bytes_ = 0;
};

void PutU64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b.data(), 8);
}

void PutString(std::ostream& out, const std::string& s) {
  PutU64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

bool GetU64(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) return false;
  v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return true;
}

bool GetString(std::istream& in, std::string& s) {
  std::uint64_t n = 0;
  if (!GetU64(in, n)) return false;
  s.resize(n);
  return static_cast<bool>(in.read(s.data(), static_cast<std::streamsize>(n)));
}

}  // namespace

std::string ShardFileName(std::string_view stem, std::size_t index,
                          std::size_t count, bool compress) {
  std::array<char, 64> buf;
  std::snprintf(buf.data(), buf.size(), "-%05zu-of-%05zu.jsonl", index, count);
  std::string name(stem);
  name += buf.data();
  if (compress) name += ".gz";
  return name;
}

ShardBuilder::ShardBuilder(std::uint64_t seed, fs::path root,
                           std::string relative_dir, std::string stem,
                           fs::path spill_root, ShardOptions options)
    : seed_(seed),
      root_(std::move(root)),
      relative_dir_(std::move(relative_dir)),
      stem_(std::move(stem)),
      spill_dir_(std::move(spill_root) /
                 (relative_dir_.empty() ? stem_ : relative_dir_ + "." + stem_)),
      options_(options) {
  if (options_.shard_count == 0) {
    throw std::invalid_argument("shard count must be at least 1");
  }
}

ShardBuilder::~ShardBuilder() {
  std::error_code ec;
  fs::remove_all(spill_dir_, ec);
}

void ShardBuilder::Add(std::string example_id, std::string line) {
  const std::uint64_t key = KeyedHash64(seed_, kShuffleDomain, example_id);
  buffer_bytes_ += example_id.size() + line.size() + sizeof(Entry);
  buffer_.push_back({key, std::move(example_id), std::move(line)});
  ++added_;
  if (buffer_bytes_ >= options_.spill_bytes) Spill();
}

void ShardBuilder::Spill() {
  if (buffer_.empty()) return;
  auto by_key = [](const Entry& a, const Entry& b) {
    return std::tie(a.key, a.id, a.line) < std::tie(b.key, b.id, b.line);
  };
  std::sort(buffer_.begin(), buffer_.end(), by_key);
  fs::create_directories(spill_dir_);
  fs::path run = spill_dir_ / ("run-" + std::to_string(runs_.size()) + ".bin");
  std::ofstream out(run, std::ios::binary | std::ios::trunc);
  if (!out) IoFail("cannot create spill file", run);
  for (const Entry& e : buffer_) {
    PutU64(out, e.key);
    PutString(out, e.id);
    PutString(out, e.line);
  }
  out.flush();
  if (!out) IoFail("spill write failed", run);
  runs_.push_back(run);
  buffer_.clear();
  buffer_bytes_ = 0;
}

std::vector<ShardFile> ShardBuilder::Finish() {
  if (finished_) throw std::logic_error("ShardBuilder::Finish called twice");
  finished_ = true;

  auto by_key = [](const Entry& a, const Entry& b) {
    return std::tie(a.key, a.id, a.line) < std::tie(b.key, b.id, b.line);
  };
  std::sort(buffer_.begin(), buffer_.end(), by_key);

  // Source 0 is the in-memory buffer, sources 1.. are spilled runs.
  std::vector<std::unique_ptr<std::ifstream>> readers;
  for (const fs::path& run : runs_) {
    auto in = std::make_unique<std::ifstream>(run, std::ios::binary);
    if (!*in) IoFail("cannot reopen spill file", run);
    readers.push_back(std::move(in));
  }
  std::vector<Entry> heads(readers.size() + 1);
  std::size_t buffer_pos = 0;

  auto advance = [&](std::size_t src) -> bool {
    if (src == 0) {
      if (buffer_pos >= buffer_.size()) return false;
      heads[0] = std::move(buffer_[buffer_pos++]);
      return true;
    }
    std::istream& in = *readers[src - 1];
    Entry& e = heads[src];
    return GetU64(in, e.key) && GetString(in, e.id) && GetString(in, e.line);
  };
  auto greater = [&](std::size_t a, std::size_t b) {
    return by_key(heads[b], heads[a]);
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(greater)>
      queue(greater);
  for (std::size_t src = 0; src < heads.size(); ++src) {
    if (advance(src)) queue.push(src);
  }

  const fs::path dir = root_ / relative_dir_;
  fs::create_directories(dir);
  std::vector<std::unique_ptr<ShardSink>> sinks;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < options_.shard_count; ++i) {
    names.push_back(
        ShardFileName(stem_, i, options_.shard_count, options_.compress));
    sinks.push_back(std::make_unique<ShardSink>(dir / names.back(),
                                                options_.compress));
  }

  std::size_t rank = 0;
  while (!queue.empty()) {
    const std::size_t src = queue.top();
    queue.pop();
    sinks[rank % sinks.size()]->WriteLine(heads[src].line);
    ++rank;
    if (advance(src)) queue.push(src);
  }

  std::vector<ShardFile> files;
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    const std::string rel =
        relative_dir_.empty() ? names[i] : relative_dir_ + "/" + names[i];
    files.push_back(sinks[i]->Close(rel));
  }
  buffer_.clear();
  readers.clear();
  std::error_code ec;
  fs::remove_all(spill_dir_, ec);
  return files;
}

std::vector<ShardFile> ShuffleAndShard(
    std::span<const std::pair<std::string, std::string>> examples,
    std::uint64_t seed, const fs::path& root, const std::string& relative_dir,
    const std::string& stem, const ShardOptions& options) {
  ShardBuilder builder(seed, root, relative_dir, stem, root / ".spill",
                       options);
  for (const auto& [id, line] : examples) builder.Add(id, line);
  auto files = builder.Finish();
  std::error_code ec;
  fs::remove(root / ".spill", ec);
  return files;
}

std::vector<std::string> ReadShardLines(const fs::path& path) {
  std::vector<std::string> lines;
  std::string content;
  if (path.extension() == ".gz") {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) IoFail("cannot open shard", path);
    std::array<char, 1 << 15> buf;
    int n;
    while ((n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
      content.append(buf.data(), static_cast<std::size_t>(n));
    }
    gzclose(f);
    if (n < 0) IoFail("corrupt gzip shard", path);
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) IoFail("cannot open shard", path);
    content.assign(std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>());
  }
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t nl = content.find('\n', start);
    if (nl == std::string::npos) nl = content.size();
    lines.push_back(content.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace scenetext
