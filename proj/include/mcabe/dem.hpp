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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcabe/rng.hpp"

namespace mcabe {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

// SHA-256 over a domain tag plus key material; the DEM/seal key derivation.
std::array<std::uint8_t, 32> derive_key(std::string_view domain,
                                        std::span<const std::uint8_t> material);

// AES-256-GCM. Output layout: nonce(12) || ciphertext || tag(16).
std::vector<std::uint8_t> aead_seal(const std::array<std::uint8_t, 32>& key,
                                    std::span<const std::uint8_t> plaintext,
                                    std::span<const std::uint8_t> aad, RandomSource& rng);

// Returns nullopt when authentication fails.
std::optional<std::vector<std::uint8_t>> aead_open(const std::array<std::uint8_t, 32>& key,
                                                   std::span<const std::uint8_t> blob,
                                                   std::span<const std::uint8_t> aad);

}  // namespace mcabe
