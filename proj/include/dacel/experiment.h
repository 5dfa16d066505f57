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

// Monte Carlo sweeps over the device count or the channel count, with CSV
// output and per-cell summary statistics.

#ifndef DACEL_EXPERIMENT_H_
#define DACEL_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dacel/allocators.h"
#include "dacel/scenario.h"

namespace dacel {

inline constexpr std::string_view kVersion = "0.1.0";

enum class SweepVariable { kDevices, kChannels };

struct SweepSpec {
  SweepVariable variable = SweepVariable::kDevices;
  std::vector<std::size_t> values;  // strictly increasing
  GenSpec fixed;                    // seed and the swept count are overridden
  std::vector<AllocatorKind> algorithms;
  std::vector<std::uint64_t> seeds;
  // Unset: deadline = max upload delay under max-h, shared by all algorithms.
  std::optional<double> fixed_deadline;
  AllocatorOptions allocator_options;

  void Validate() const;
};

// M in 4..10 with N = 3.
SweepSpec DeviceSweepSpec(std::size_t num_seeds = 100);
// N in {2, 3, 4, 6, 8, 12, 16} with M = 10.
SweepSpec ChannelSweepSpec(std::size_t num_seeds = 100);
// seeds first, first + 1, ..., first + count - 1
std::vector<std::uint64_t> SeedRange(std::uint64_t first, std::size_t count);

struct SweepRow {
  std::uint64_t seed = 0;
  std::size_t num_devices = 0;
  std::size_t num_channels = 0;
  AllocatorKind algorithm = AllocatorKind::kDdMaxH;
  double d_tx = 0.0;
  double d_cpu = 0.0;
  double d_total = 0.0;
  double received_samples = 0.0;
  std::size_t dropped_count = 0;
  std::int64_t k_r = 0;
  std::size_t iterations = 0;
  double deadline = 0.0;
  std::string skip_reason;  // non-empty for rows the allocator refused

  bool skipped() const { return !skip_reason.empty(); }
  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (seed, value, algorithm)
  std::string spec_echo;
  std::string generator = std::string(kGeneratorName);
  std::string version = std::string(kVersion);
};

// Cells are independent; `jobs` > 1 evaluates them on worker threads
// without changing the output.
SweepResult RunSweep(const SweepSpec& spec, std::size_t jobs = 1);

// Header: seed,M,N,algorithm,d_tx,d_cpu,d_total,received_samples,
// dropped_count,k_r,iterations,deadline,note
std::string FormatCsv(const std::vector<SweepRow>& rows);
// Throws ParseError on malformed input.
std::vector<SweepRow> ParseCsv(std::string_view text);
std::string FormatMetadata(const SweepResult& result);

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
};

struct SummaryRow {
  std::size_t num_devices = 0;
  std::size_t num_channels = 0;
  AllocatorKind algorithm = AllocatorKind::kDdMaxH;
  std::size_t runs = 0;
  Stats d_total;
  Stats d_tx;
  Stats d_cpu;
  double drop_rate = 0.0;  // dropped datasets over all datasets
};

// Groups non-skipped rows by (M, N, algorithm), in first-seen order.
std::vector<SummaryRow> Summarize(const std::vector<SweepRow>& rows);
std::string FormatSummaryTable(const std::vector<SummaryRow>& summary);
std::string FormatSummaryCsv(const std::vector<SummaryRow>& summary);

}  // namespace dacel

#endif  // DACEL_EXPERIMENT_H_
