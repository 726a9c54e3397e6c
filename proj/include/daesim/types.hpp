// Copyright 2026 The daesim Authors
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

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace daesim {

using Cycle = std::uint64_t;
using Addr = std::uint64_t;

/// 32-bit datapath word. Kernels interpret it as an unsigned integer or as an
/// IEEE-754 single-precision float.
using Word = std::uint32_t;

inline constexpr Word kNil = 0xFFFFFFFFu;
inline constexpr Addr kWordBytes = 4;

inline Word word_from_float(float f) noexcept { return std::bit_cast<Word>(f); }
inline float word_to_float(Word w) noexcept { return std::bit_cast<float>(w); }

enum class ChannelId : std::uint32_t {};
enum class PortId : std::uint32_t {};
enum class ProcessId : std::uint32_t {};
enum class RegionId : std::uint32_t {};
enum class StoreSiteId : std::uint32_t {};
enum class AxiId : std::uint16_t {};

template <typename E>
constexpr std::size_t to_index(E e) noexcept {
  static_assert(std::is_enum_v<E>);
  return static_cast<std::size_t>(static_cast<std::underlying_type_t<E>>(e));
}

template <typename E>
constexpr E from_index(std::size_t i) noexcept {
  static_assert(std::is_enum_v<E>);
  return static_cast<E>(static_cast<std::underlying_type_t<E>>(i));
}

inline constexpr std::size_t kMaxPayloadWords = 4;

/// A bundle of one to four words moved as a single transfer: a wide memory
/// read (16-byte hash entry) or a packed multi-word stream element.
struct Payload {
  std::array<Word, kMaxPayloadWords> words{};
  std::uint8_t size = 0;

  Payload() = default;
  Payload(Word w) noexcept : size(1) { words[0] = w; }  // NOLINT: implicit by intent
  Payload(std::initializer_list<Word> ws) {
    if (ws.size() > kMaxPayloadWords) throw std::length_error("payload wider than 4 words");
    std::copy(ws.begin(), ws.end(), words.begin());
    size = static_cast<std::uint8_t>(ws.size());
  }

  Word operator[](std::size_t i) const noexcept { return words[i]; }
  Word& operator[](std::size_t i) noexcept { return words[i]; }
  Word front() const noexcept { return words[0]; }

  friend bool operator==(const Payload& a, const Payload& b) noexcept {
    return a.size == b.size && std::equal(a.words.begin(), a.words.begin() + a.size, b.words.begin());
  }
};

/// Raised when a run hits a condition that indicates a broken configuration or
/// kernel (out-of-region address, write to a read-only model, endpoint misuse).
class SimFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid user-supplied configuration or workload data.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace daesim
