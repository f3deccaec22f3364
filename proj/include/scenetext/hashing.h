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

// Stable hashing. Every seeded decision in the pipeline (subsampling, split
// points, shuffle order) is a function of one of these hashes, so the
// values must not depend on platform, build or process.

#ifndef SCENETEXT_HASHING_H_
#define SCENETEXT_HASHING_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace scenetext {

// Domain tags keep the three uses of the keyed hash independent.
inline constexpr std::string_view kSubsampleDomain = "subsample";
inline constexpr std::string_view kSplitDomain = "split";
inline constexpr std::string_view kShuffleDomain = "shuffle";

// SipHash-2-4 of (domain, data) keyed by `seed`.
std::uint64_t KeyedHash64(std::uint64_t seed, std::string_view domain,
                          std::string_view data);

// Maps a 64-bit hash onto [0, 1) using its top 53 bits, exactly
// representable as a double.
inline double UnitInterval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1p-53;
}

// Streaming BLAKE2b-256, hex encoded.
class ContentDigest {
 public:
  ContentDigest();
  ~ContentDigest();
  ContentDigest(const ContentDigest&) = delete;
  ContentDigest& operator=(const ContentDigest&) = delete;

  void Update(std::string_view bytes);
  std::string HexFinal();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::string DigestHex(std::string_view bytes);

}  // namespace scenetext

#endif  // SCENETEXT_HASHING_H_
