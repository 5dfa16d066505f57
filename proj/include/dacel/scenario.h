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

// Seeded scenario generation and the plain-text scenario file format.
//
// Generation is counter based: every random quantity is a pure function of
// (seed, stream, device, channel). A scenario drawn for (seed, M, N) is
// therefore the leading M x N block of the one drawn for (seed, M', N') with
// M' >= M and N' >= N, which keeps device- and channel-count sweeps nested.
//
// Scenario file grammar (one item per line, '#' starts a comment):
//
//   [radio]
//   bandwidth = <Hz>
//   noise = <W>
//   power = <W>            optional, fills [powers] when that section is absent
//   deadline = <s>         optional
//   [training]
//   batch_size = <samples>
//   compute_rate = <samples/s>
//   alpha = <real>
//   sigma = <real>
//   round_cap = <int>
//   [devices]
//   dataset_bits = <L_1> ... <L_M>
//   sample_counts = <W_1> ... <W_M>
//   [gains]
//   <h_11> ... <h_1N>      M rows of N numbers
//   [powers]               optional, same shape as [gains]
//
// Keys missing from [radio] and [training] take the defaults of GenSpec.
// M and N are the row and column counts of [gains].

#ifndef DACEL_SCENARIO_H_
#define DACEL_SCENARIO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "dacel/core_model.h"

namespace dacel {

inline constexpr std::string_view kGeneratorName = "splitmix64-counter-v1";

// Stateless generator: each draw hashes its coordinates with SplitMix64.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t Bits(std::uint64_t stream, std::uint64_t i,
                     std::uint64_t j = 0) const;
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform(std::uint64_t stream, std::uint64_t i,
                 std::uint64_t j = 0) const;

 private:
  std::uint64_t seed_;
};

struct GenSpec {
  std::uint64_t seed = 0;
  std::size_t num_devices = 6;
  std::size_t num_channels = 3;
  double gain_min = 4.0e-10;
  double gain_max = 0.035;
  double mean_dataset_bits = 1.44e7;  // 1.8 MB
  double bits_per_sample = 1800.0;
  double bandwidth = 5.0e6;
  double noise = 1.0e-10;
  double power = 0.1;
  TrainingParams training;

  void Validate() const;
};

// Gains log-uniform on [gain_min, gain_max] per (device, channel); dataset
// sizes uniform on [0.5, 1.5] x mean; sample counts derived from the size.
Scenario Generate(const GenSpec& spec);

std::string FormatScenario(const Scenario& s);
// Throws ParseError (with line) or ValidationError (with field).
Scenario ParseScenario(std::string_view text);
Scenario LoadScenario(const std::filesystem::path& path);
void SaveScenario(const Scenario& s, const std::filesystem::path& path);

// Overrides fields of `base` from a generator config with optional
// [generator] (seed, devices, channels, gain_min, gain_max,
// mean_dataset_bits, bits_per_sample), [radio] (bandwidth, noise, power) and
// [training] sections.
GenSpec ParseGenSpec(std::string_view text, GenSpec base = {});

// True when the text carries an explicit [gains] section.
bool IsExplicitScenario(std::string_view text);

// Shortest decimal text that parses back to exactly `v`.
std::string FormatDouble(double v);

}  // namespace dacel

#endif  // DACEL_SCENARIO_H_
