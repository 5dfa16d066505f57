// Copyright 2026 The Authors.
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

// Event-level run of one collaborative learning round:
//
//   1. server sends the collection request and starts its timer
//   2. each device asks the base station for a channel
//   3. the base station runs the allocator and feeds the decision back
//   4. all devices start uploading at the same instant
//   5. the server aggregates once every dataset arrived or the timer fired;
//      late datasets are dropped
//   6. the server trains on what it received
//   7. the result is fed back
//
// Signalling in steps 1-3 takes zero time, so the learning-delay clock
// starts at UPLOAD_START (t = 0).

#ifndef DACEL_PROTOCOL_H_
#define DACEL_PROTOCOL_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dacel/allocators.h"
#include "dacel/core_model.h"

namespace dacel {

enum class ActorType { kEdgeServer, kBaseStation, kDevice };

struct Actor {
  ActorType type = ActorType::kEdgeServer;
  std::size_t device = 0;  // meaningful for kDevice only

  static Actor EdgeServer() { return {ActorType::kEdgeServer, 0}; }
  static Actor BaseStation() { return {ActorType::kBaseStation, 0}; }
  static Actor Device(std::size_t m) { return {ActorType::kDevice, m}; }

  // Tiebreak rank: server, base station, then devices by index.
  std::size_t Rank() const;
  bool operator==(const Actor&) const = default;
};

// Declared in protocol step order; the ordering is part of the trace format.
enum class EventKind {
  kCollectionRequest,
  kChannelRequest,
  kAllocationDecision,
  kUploadStart,
  kUploadComplete,
  kDatasetDropped,
  kAggregationDone,
  kTrainingDone,
  kResultFeedback,
};

std::string_view EventKindName(EventKind kind);

using PayloadValue = std::variant<double, std::string>;

struct ProtocolEvent {
  double time = 0.0;
  Actor actor;
  EventKind kind = EventKind::kCollectionRequest;
  std::vector<std::pair<std::string, PayloadValue>> payload;

  // Throws ValidationError when the key is absent or not numeric.
  double Number(std::string_view key) const;
  bool operator==(const ProtocolEvent&) const = default;
};

struct EventTrace {
  std::vector<ProtocolEvent> events;  // sorted by (time, kind, actor rank)
  AllocationResult allocation;  // allocator output; the report uses .alloc
  DelayReport report;
};

// Throws ConfigError when s.deadline is unset; CapExceeded propagates from
// the exhaustive allocator.
EventTrace RunDacel(const Scenario& s, AllocatorKind kind,
                    const AllocatorOptions& options = {});

// Max upload delay of the max-gain allocation; +inf if some device cannot
// transmit at all.
double DeadlineRule(const Scenario& s);

// Rebuilds the report from the events alone. Throws ValidationError naming
// the first broken trace invariant.
DelayReport Replay(const EventTrace& trace);

// One event per line: time, actor, kind, then key=value payload fields, all
// tab separated; numbers with 12 significant digits.
std::string SerializeTrace(const EventTrace& trace);

}  // namespace dacel

#endif  // DACEL_PROTOCOL_H_
