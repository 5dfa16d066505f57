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

// Channel allocation policies for the min-delay NOMA channel assignment
// problem: every device picks exactly one channel.
//
//   kDdMaxH      best-gain start, then repeatedly move the slowest device to
//                the channel that minimises its own delay while the global
//                maximum upload delay keeps strictly falling.
//   kMaxHGreedy  each device on its highest-gain channel.
//   kMinHGreedy  each device on its lowest-gain channel.
//   kSpdm        devices placed one by one in decreasing dataset size, each on
//                the channel with the smallest delay given the devices
//                already placed.
//   kExhaustive  enumeration of all N^M assignments.
//
// All ties break towards the lowest device / channel index.

#ifndef DACEL_ALLOCATORS_H_
#define DACEL_ALLOCATORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dacel/core_model.h"

namespace dacel {

enum class AllocatorKind { kDdMaxH, kMaxHGreedy, kMinHGreedy, kSpdm, kExhaustive };

// CLI names: "dd-maxh", "max-h", "min-h", "spdm", "exhaustive".
std::string_view AllocatorName(AllocatorKind kind);
// Throws ValidationError on an unknown name.
AllocatorKind ParseAllocatorKind(std::string_view name);
std::vector<AllocatorKind> AllAllocators();
std::vector<AllocatorKind> HeuristicAllocators();

struct AllocatorOptions {
  // dd-maxh switch limit; 0 means 10 * M.
  std::size_t iteration_cap = 0;
  // Largest N^M the exhaustive search accepts.
  double exhaustive_cap = 1.0e6;
};

struct AllocationResult {
  AllocationMatrix alloc;
  // Committed delay-descent switches; 0 for single-pass policies.
  std::size_t iterations = 0;
  // False only when dd-maxh stopped because it hit the iteration cap.
  bool converged = true;
  double max_upload_delay = 0.0;
  // Total learning delay under the scenario deadline (or no deadline when
  // the scenario has none).
  double objective = 0.0;
  // dd-maxh only: max upload delay at the start and after every switch.
  std::vector<double> max_delay_history;
};

struct ExhaustiveResult {
  AllocationResult best_total;   // minimises total learning delay
  AllocationMatrix min_max_alloc;
  double min_max_upload_delay = 0.0;
  std::uint64_t evaluated = 0;
};

AllocationResult MaxHGreedy(const Scenario& s);
AllocationResult MinHGreedy(const Scenario& s);
AllocationResult Spdm(const Scenario& s);
AllocationResult DdMaxH(const Scenario& s, const AllocatorOptions& options = {});
// Throws CapExceeded when N^M > options.exhaustive_cap.
ExhaustiveResult Exhaustive(const Scenario& s,
                            const AllocatorOptions& options = {});

AllocationResult Allocate(AllocatorKind kind, const Scenario& s,
                          const AllocatorOptions& options = {});

}  // namespace dacel

#endif  // DACEL_ALLOCATORS_H_
