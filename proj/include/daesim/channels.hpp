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

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>

#include "daesim/types.hpp"

namespace daesim {

inline constexpr ProcessId kNoProcess = from_index<ProcessId>(0xFFFFFFFFu);

/// Bounded in-order value FIFO between one producer and one consumer.
struct StreamChannel {
  std::string name;
  std::size_t capacity = 1;
  std::deque<Payload> fifo;
  ProcessId producer = kNoProcess;
  ProcessId consumer = kNoProcess;
  std::uint64_t enq_count = 0;
  std::uint64_t deq_count = 0;
  std::size_t peak_occupancy = 0;

  std::size_t occupancy() const noexcept { return fifo.size(); }
  bool full() const noexcept { return fifo.size() >= capacity; }
};

/// Load channel: the producer sends addresses, the memory port answers, and
/// the consumer receives the loaded values in request order. Responses that
/// come back early wait in their reorder slot.
struct DecoupleChannel {
  std::string name;
  std::size_t capacity = 1;
  PortId port{};
  AxiId axi{};
  std::uint8_t words = 1;
  ProcessId producer = kNoProcess;
  ProcessId consumer = kNoProcess;
  std::uint64_t next_seq = 0;  // == requests issued
  std::uint64_t head_seq = 0;  // == responses consumed
  std::uint64_t delivered = 0;
  std::deque<std::optional<Payload>> reorder;
  std::size_t peak_in_flight = 0;

  std::size_t in_flight() const noexcept { return static_cast<std::size_t>(next_seq - head_seq); }
  bool head_ready() const noexcept { return !reorder.empty() && reorder.front().has_value(); }
};

using Channel = std::variant<StreamChannel, DecoupleChannel>;

/// Issue/ack bookkeeping for one static store instruction.
struct StoreSite {
  std::string name;
  PortId port{};
  AxiId axi{};
  ProcessId owner = kNoProcess;
  std::uint64_t issued = 0;
  std::uint64_t acked = 0;
};

}  // namespace daesim
