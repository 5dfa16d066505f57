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

#include "dacel/allocators.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dacel/errors.h"

namespace dacel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double MaxOf(const std::vector<double>& v) {
  double worst = 0.0;
  for (double d : v) worst = std::max(worst, d);
  return worst;
}

double ObjectiveDeadline(const Scenario& s) {
  return s.deadline.value_or(kInf);
}

AllocationResult Finish(const Scenario& s, AllocationMatrix alloc) {
  AllocationResult result;
  const DelayReport report = TotalDelay(s, alloc, ObjectiveDeadline(s));
  result.max_upload_delay = MaxOf(report.per_device_delay);
  result.objective = report.d_total;
  result.alloc = std::move(alloc);
  return result;
}

template <typename Better>
AllocationMatrix PickPerRow(const Scenario& s, Better better) {
  AllocationMatrix alloc(s.num_devices, s.num_channels);
  for (std::size_t m = 0; m < s.num_devices; ++m) {
    std::size_t pick = 0;
    for (std::size_t n = 1; n < s.num_channels; ++n) {
      if (better(s.gains(m, n), s.gains(m, pick))) pick = n;
    }
    alloc.Assign(m, pick);
  }
  return alloc;
}

// Advances the channel vector like an odometer, last device fastest.
bool NextAssignment(std::vector<std::size_t>& channels,
                    std::size_t num_channels) {
  for (std::size_t pos = channels.size(); pos-- > 0;) {
    if (++channels[pos] < num_channels) return true;
    channels[pos] = 0;
  }
  return false;
}

AllocationMatrix MaxGainAllocation(const Scenario& s) {
  return PickPerRow(s, [](double a, double b) { return a > b; });
}

}  // namespace

std::string_view AllocatorName(AllocatorKind kind) {
  switch (kind) {
    case AllocatorKind::kDdMaxH:
      return "dd-maxh";
    case AllocatorKind::kMaxHGreedy:
      return "max-h";
    case AllocatorKind::kMinHGreedy:
      return "min-h";
    case AllocatorKind::kSpdm:
      return "spdm";
    case AllocatorKind::kExhaustive:
      return "exhaustive";
  }
  return "unknown";
}

AllocatorKind ParseAllocatorKind(std::string_view name) {
  for (AllocatorKind kind : AllAllocators()) {
    if (AllocatorName(kind) == name) return kind;
  }
  throw ValidationError("algorithm", "unknown allocator '" +
                                         std::string(name) + "'");
}

std::vector<AllocatorKind> AllAllocators() {
  return {AllocatorKind::kDdMaxH, AllocatorKind::kMaxHGreedy,
          AllocatorKind::kMinHGreedy, AllocatorKind::kSpdm,
          AllocatorKind::kExhaustive};
}

std::vector<AllocatorKind> HeuristicAllocators() {
  return {AllocatorKind::kDdMaxH, AllocatorKind::kMaxHGreedy,
          AllocatorKind::kMinHGreedy, AllocatorKind::kSpdm};
}

AllocationResult MaxHGreedy(const Scenario& s) {
  return Finish(s, MaxGainAllocation(s));
}

AllocationResult MinHGreedy(const Scenario& s) {
  return Finish(s, PickPerRow(s, [](double a, double b) { return a < b; }));
}

AllocationResult Spdm(const Scenario& s) {
  std::vector<std::size_t> order(s.num_devices);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return s.dataset_bits[a] > s.dataset_bits[b];
                   });

  // Unplaced devices keep all-zero rows and so contribute no interference.
  AllocationMatrix alloc(s.num_devices, s.num_channels);
  for (std::size_t m : order) {
    std::size_t pick = 0;
    double pick_delay = kInf;
    for (std::size_t n = 0; n < s.num_channels; ++n) {
      alloc.Assign(m, n);
      const double delay = UploadDelay(s, alloc, m);
      if (delay < pick_delay) {
        pick = n;
        pick_delay = delay;
      }
    }
    alloc.Assign(m, pick);
  }
  return Finish(s, std::move(alloc));
}

AllocationResult DdMaxH(const Scenario& s, const AllocatorOptions& options) {
  const std::size_t cap =
      options.iteration_cap ? options.iteration_cap : 10 * s.num_devices;

  AllocationMatrix alloc = MaxGainAllocation(s);
  std::vector<double> delays = UploadDelays(s, alloc);
  double worst_delay = MaxOf(delays);

  AllocationResult result;
  result.max_delay_history.push_back(worst_delay);

  while (true) {
    const auto worst = static_cast<std::size_t>(
        std::max_element(delays.begin(), delays.end()) - delays.begin());
    const std::size_t current = *alloc.ChannelOf(worst);

    std::optional<std::size_t> target;
    double target_delay = kInf;
    AllocationMatrix trial = alloc;
    for (std::size_t n = 0; n < s.num_channels; ++n) {
      if (n == current) continue;
      trial.Assign(worst, n);
      const double delay = UploadDelay(s, trial, worst);
      if (delay < target_delay) {
        target = n;
        target_delay = delay;
      }
    }
    if (!target || !(target_delay < delays[worst])) break;

    // The move may push another device above the old maximum; only keep it
    // if the global maximum strictly falls.
    trial.Assign(worst, *target);
    std::vector<double> trial_delays = UploadDelays(s, trial);
    const double trial_worst = MaxOf(trial_delays);
    if (!(trial_worst < worst_delay)) break;

    if (result.iterations == cap) {
      result.converged = false;
      break;
    }
    alloc = std::move(trial);
    delays = std::move(trial_delays);
    worst_delay = trial_worst;
    ++result.iterations;
    result.max_delay_history.push_back(worst_delay);
  }

  AllocationResult finished = Finish(s, std::move(alloc));
  finished.iterations = result.iterations;
  finished.converged = result.converged;
  finished.max_delay_history = std::move(result.max_delay_history);
  return finished;
}

ExhaustiveResult Exhaustive(const Scenario& s,
                            const AllocatorOptions& options) {
  const double required = std::pow(static_cast<double>(s.num_channels),
                                   static_cast<double>(s.num_devices));
  if (required > options.exhaustive_cap) {
    throw CapExceeded(required, options.exhaustive_cap);
  }

  const double deadline = ObjectiveDeadline(s);
  ExhaustiveResult out;
  double best_total = kInf;
  std::vector<std::size_t> best_total_channels;
  double best_max = kInf;
  std::vector<std::size_t> best_max_channels;

  // Odometer in lexicographic order of the channel vector, device 0 most
  // significant, so the first minimum found is the lexicographically
  // smallest one.
  std::vector<std::size_t> channels(s.num_devices, 0);
  while (true) {
    const AllocationMatrix alloc =
        AllocationMatrix::FromChannels(channels, s.num_channels);
    const DelayReport report = TotalDelay(s, alloc, deadline);
    const double worst = MaxOf(report.per_device_delay);
    ++out.evaluated;
    if (report.d_total < best_total || best_total_channels.empty()) {
      best_total = report.d_total;
      best_total_channels = channels;
    }
    if (worst < best_max || best_max_channels.empty()) {
      best_max = worst;
      best_max_channels = channels;
    }

    if (!NextAssignment(channels, s.num_channels)) break;
  }

  out.best_total = Finish(
      s, AllocationMatrix::FromChannels(best_total_channels, s.num_channels));
  out.min_max_alloc =
      AllocationMatrix::FromChannels(best_max_channels, s.num_channels);
  out.min_max_upload_delay = best_max;
  return out;
}

AllocationResult Allocate(AllocatorKind kind, const Scenario& s,
                          const AllocatorOptions& options) {
  switch (kind) {
    case AllocatorKind::kDdMaxH:
      return DdMaxH(s, options);
    case AllocatorKind::kMaxHGreedy:
      return MaxHGreedy(s);
    case AllocatorKind::kMinHGreedy:
      return MinHGreedy(s);
    case AllocatorKind::kSpdm:
      return Spdm(s);
    case AllocatorKind::kExhaustive:
      return Exhaustive(s, options).best_total;
  }
  throw ContractViolation("unknown allocator kind");
}

}  // namespace dacel
