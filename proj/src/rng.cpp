// Copyright 2026 The MCABE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcabe/rng.hpp"

#include <openssl/rand.h>

#include <cstring>
#include <stdexcept>

#include "mcabe/dem.hpp"

namespace mcabe {

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
    throw std::runtime_error("RAND_bytes failed");
}

SeededRandom::SeededRandom(std::uint64_t seed) {
  std::uint8_t material[17] = {'m', 'c', 'a', 'b', 'e', '.', 'r', 'n', 'g'};
  for (int i = 0; i < 8; ++i) material[9 + i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
  key_ = sha256(std::span<const std::uint8_t>(material, sizeof(material)));
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::size_t pos = 0;
  while (pos < out.size()) {
    if (available_ == 0) {
      std::uint8_t block[40];
      std::memcpy(block, key_.data(), 32);
      for (int i = 0; i < 8; ++i)
        block[32 + i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
      ++counter_;
      buffer_ = sha256(std::span<const std::uint8_t>(block, sizeof(block)));
      available_ = buffer_.size();
    }
    std::size_t n = std::min(available_, out.size() - pos);
    std::memcpy(out.data() + pos, buffer_.data() + (buffer_.size() - available_), n);
    available_ -= n;
    pos += n;
  }
}

}  // namespace mcabe
