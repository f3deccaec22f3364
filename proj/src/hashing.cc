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

#include "scenetext/hashing.h"

#include <sodium.h>

#include <array>
#include <mutex>
#include <stdexcept>

namespace scenetext {
namespace {

void EnsureSodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
  });
}

}  // namespace

std::uint64_t KeyedHash64(std::uint64_t seed, std::string_view domain,
                          std::string_view data) {
  EnsureSodium();
  static_assert(crypto_shorthash_KEYBYTES == 16);
  static_assert(crypto_shorthash_BYTES == 8);
  std::array<unsigned char, crypto_shorthash_KEYBYTES> key{};
  for (int i = 0; i < 8; ++i) {
    key[i] = static_cast<unsigned char>(seed >> (8 * i));
  }
  constexpr char kPepper[8] = {'s', 'c', 'n', 't', 'x', 't', '0', '1'};
  for (int i = 0; i < 8; ++i) key[8 + i] = static_cast<unsigned char>(kPepper[i]);

  std::string message;
  message.reserve(domain.size() + 1 + data.size());
  message.append(domain);
  message.push_back('\x1f');
  message.append(data);

  std::array<unsigned char, crypto_shorthash_BYTES> out{};
  crypto_shorthash(out.data(),
                   reinterpret_cast<const unsigned char*>(message.data()),
                   message.size(), key.data());
  std::uint64_t h = 0;
  for (int i = 7; i >= 0; --i) h = (h << 8) | out[i];
  return h;
}

struct ContentDigest::State {
  crypto_generichash_state st;
};

ContentDigest::ContentDigest() : state_(std::make_unique<State>()) {
  EnsureSodium();
  crypto_generichash_init(&state_->st, nullptr, 0, 32);
}

ContentDigest::~ContentDigest() = default;

void ContentDigest::Update(std::string_view bytes) {
  crypto_generichash_update(
      &state_->st, reinterpret_cast<const unsigned char*>(bytes.data()),
      bytes.size());
}

std::string ContentDigest::HexFinal() {
  std::array<unsigned char, 32> out{};
  crypto_generichash_final(&state_->st, out.data(), out.size());
  std::array<char, 65> hex{};
  sodium_bin2hex(hex.data(), hex.size(), out.data(), out.size());
  return std::string(hex.data(), 64);
}

std::string DigestHex(std::string_view bytes) {
  ContentDigest d;
  d.Update(bytes);
  return d.HexFinal();
}

}  // namespace scenetext
