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

#include "dacel/core_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dacel/errors.h"

namespace dacel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool PositiveFinite(double v) { return std::isfinite(v) && v > 0.0; }

void CheckIndex(const Scenario& s, const AllocationMatrix& alloc,
                std::size_t m, std::size_t n) {
  if (alloc.num_devices() != s.num_devices ||
      alloc.num_channels() != s.num_channels) {
    throw ContractViolation("allocation shape does not match scenario");
  }
  if (m >= s.num_devices) {
    throw ContractViolation("device index " + std::to_string(m) +
                            " out of range");
  }
  if (n >= s.num_channels) {
    throw ContractViolation("channel index " + std::to_string(n) +
                            " out of range");
  }
}

void CheckPositive(const std::string& field, double v) {
  if (!PositiveFinite(v)) {
    throw ValidationError(field, "must be positive and finite");
  }
}

}  // namespace

double TrainingParams::DefaultAlpha() {
  return 20.0 * std::pow(4.8e4, 1.2);
}

void TrainingParams::Validate() const {
  CheckPositive("training.batch_size", batch_size);
  CheckPositive("training.compute_rate", compute_rate);
  CheckPositive("training.alpha", alpha);
  if (!std::isfinite(sigma) || sigma <= 1.0) {
    throw ValidationError("training.sigma", "must be finite and > 1");
  }
  if (round_cap < 1) {
    throw ValidationError("training.round_cap", "must be >= 1");
  }
}

void Scenario::Validate() const {
  if (num_devices == 0) throw ValidationError("num_devices", "must be >= 1");
  if (num_channels == 0) throw ValidationError("num_channels", "must be >= 1");
  if (gains.rows() != num_devices || gains.cols() != num_channels) {
    throw ValidationError("gains", "shape must be num_devices x num_channels");
  }
  if (powers.rows() != num_devices || powers.cols() != num_channels) {
    throw ValidationError("powers",
                          "shape must be num_devices x num_channels");
  }
  if (dataset_bits.size() != num_devices) {
    throw ValidationError("dataset_bits", "length must equal num_devices");
  }
  if (sample_counts.size() != num_devices) {
    throw ValidationError("sample_counts", "length must equal num_devices");
  }
  for (std::size_t m = 0; m < num_devices; ++m) {
    for (std::size_t n = 0; n < num_channels; ++n) {
      const std::string at =
          "[" + std::to_string(m) + "][" + std::to_string(n) + "]";
      CheckPositive("gains" + at, gains(m, n));
      if (!std::isfinite(powers(m, n)) || powers(m, n) < 0.0) {
        throw ValidationError("powers" + at, "must be finite and >= 0");
      }
    }
    CheckPositive("dataset_bits[" + std::to_string(m) + "]", dataset_bits[m]);
    CheckPositive("sample_counts[" + std::to_string(m) + "]",
                  sample_counts[m]);
  }
  CheckPositive("bandwidth", bandwidth);
  CheckPositive("noise", noise);
  if (deadline && (std::isnan(*deadline) || *deadline < 0.0)) {
    throw ValidationError("deadline", "must be >= 0");
  }
  training.Validate();
}

AllocationMatrix AllocationMatrix::FromChannels(
    std::span<const std::size_t> channels, std::size_t num_channels) {
  AllocationMatrix alloc(channels.size(), num_channels);
  for (std::size_t m = 0; m < channels.size(); ++m) {
    if (channels[m] >= num_channels) {
      throw ContractViolation("channel index out of range");
    }
    alloc.Assign(m, channels[m]);
  }
  return alloc;
}

void AllocationMatrix::Assign(std::size_t m, std::size_t n) {
  ClearRow(m);
  Set(m, n, true);
}

void AllocationMatrix::ClearRow(std::size_t m) {
  std::fill_n(entries_.begin() + m * num_channels_, num_channels_, 0);
}

std::optional<std::size_t> AllocationMatrix::ChannelOf(std::size_t m) const {
  std::optional<std::size_t> found;
  for (std::size_t n = 0; n < num_channels_; ++n) {
    if (!at(m, n)) continue;
    if (found) return std::nullopt;
    found = n;
  }
  return found;
}

bool AllocationMatrix::IsComplete() const {
  for (std::size_t m = 0; m < num_devices_; ++m) {
    if (!ChannelOf(m)) return false;
  }
  return true;
}

std::vector<std::size_t> AllocationMatrix::Channels() const {
  std::vector<std::size_t> out(num_devices_);
  for (std::size_t m = 0; m < num_devices_; ++m) {
    const auto n = ChannelOf(m);
    if (!n) {
      throw ContractViolation("row " + std::to_string(m) + " is not one-hot");
    }
    out[m] = *n;
  }
  return out;
}

double InterCellInterference(const Scenario& s, const AllocationMatrix& alloc,
                             std::size_t m, std::size_t n) {
  CheckIndex(s, alloc, m, n);
  const double own = s.gains(m, n);
  double sum = 0.0;
  for (std::size_t k = 0; k < s.num_devices; ++k) {
    if (k == m) continue;
    for (std::size_t other = 0; other < s.num_channels; ++other) {
      if (other == n || !alloc.at(k, other)) continue;
      const double h = s.gains(k, other);
      if (h < own) sum += s.powers(k, other) * h;
    }
  }
  return sum;
}

double IntraCellInterference(const Scenario& s, const AllocationMatrix& alloc,
                             std::size_t m, std::size_t n) {
  CheckIndex(s, alloc, m, n);
  const double own = s.gains(m, n);
  double sum = 0.0;
  for (std::size_t k = 0; k < s.num_devices; ++k) {
    if (k == m || !alloc.at(k, n)) continue;
    const double h = s.gains(k, n);
    if (h < own) sum += s.powers(k, n) * h;
  }
  return sum;
}

double UplinkRate(const Scenario& s, const AllocationMatrix& alloc,
                  std::size_t m, std::size_t n) {
  CheckIndex(s, alloc, m, n);
  if (!alloc.at(m, n)) return 0.0;
  const double interference = InterCellInterference(s, alloc, m, n) +
                              IntraCellInterference(s, alloc, m, n) + s.noise;
  const double sinr = s.powers(m, n) * s.gains(m, n) / interference;
  // log1p keeps full relative precision at very low SINR.
  return s.bandwidth * std::log1p(sinr) / std::numbers::ln2;
}

double DeviceRate(const Scenario& s, const AllocationMatrix& alloc,
                  std::size_t m) {
  double rate = 0.0;
  for (std::size_t n = 0; n < s.num_channels; ++n) {
    rate += UplinkRate(s, alloc, m, n);
  }
  return rate;
}

double UploadDelay(const Scenario& s, const AllocationMatrix& alloc,
                   std::size_t m) {
  const double rate = DeviceRate(s, alloc, m);
  if (!(rate > 0.0)) return kInf;
  return s.dataset_bits[m] / rate;
}

std::vector<double> UploadDelays(const Scenario& s,
                                 const AllocationMatrix& alloc) {
  std::vector<double> delays(s.num_devices);
  for (std::size_t m = 0; m < s.num_devices; ++m) {
    delays[m] = UploadDelay(s, alloc, m);
  }
  return delays;
}

SystemUpload SystemUploadDelay(std::span<const double> delays,
                               double deadline) {
  SystemUpload out;
  out.received_mask.resize(delays.size());
  double worst = 0.0;
  for (std::size_t m = 0; m < delays.size(); ++m) {
    worst = std::max(worst, delays[m]);
    out.received_mask[m] = delays[m] <= deadline;
  }
  out.d_tx = std::min(worst, deadline);
  return out;
}

SystemUpload SystemUploadDelay(const Scenario& s,
                               const AllocationMatrix& alloc) {
  if (!s.deadline) throw ConfigError("collection deadline is not set");
  return SystemUploadDelay(UploadDelays(s, alloc), *s.deadline);
}

TrainingCost TrainingDelay(const TrainingParams& params,
                           double received_samples) {
  if (received_samples < 0.0) {
    throw ContractViolation("received_samples must be >= 0");
  }
  TrainingCost out;
  if (received_samples == 0.0) {
    out.k_r = params.round_cap;
    out.no_data = true;
    return out;
  }
  const double batch_delay = params.batch_size / params.compute_rate;
  out.d_cpu_round = batch_delay * received_samples / params.batch_size;
  const double rounds =
      std::ceil(params.alpha / std::pow(received_samples, params.sigma));
  out.k_r = rounds >= static_cast<double>(params.round_cap)
                ? params.round_cap
                : std::max<std::int64_t>(1, static_cast<std::int64_t>(rounds));
  out.d_cpu = static_cast<double>(out.k_r) * out.d_cpu_round;
  return out;
}

DelayReport TotalDelay(const Scenario& s, const AllocationMatrix& alloc,
                       double deadline) {
  if (alloc.num_devices() != s.num_devices ||
      alloc.num_channels() != s.num_channels) {
    throw ContractViolation("allocation shape does not match scenario");
  }
  for (std::size_t m = 0; m < s.num_devices; ++m) {
    if (!alloc.ChannelOf(m)) {
      throw ContractViolation("allocation row " + std::to_string(m) +
                              " is not one-hot");
    }
  }
  DelayReport report;
  report.per_device_delay = UploadDelays(s, alloc);
  SystemUpload upload = SystemUploadDelay(report.per_device_delay, deadline);
  report.d_tx = upload.d_tx;
  report.received_mask = std::move(upload.received_mask);
  for (std::size_t m = 0; m < s.num_devices; ++m) {
    if (report.received_mask[m]) report.received_samples += s.sample_counts[m];
  }
  const TrainingCost training = TrainingDelay(s.training,
                                              report.received_samples);
  report.k_r = training.k_r;
  report.d_cpu_round = training.d_cpu_round;
  report.d_cpu = training.d_cpu;
  report.no_data = training.no_data;
  report.d_total = report.d_tx + report.d_cpu;
  return report;
}

DelayReport TotalDelay(const Scenario& s, const AllocationMatrix& alloc) {
  if (!s.deadline) throw ConfigError("collection deadline is not set");
  return TotalDelay(s, alloc, *s.deadline);
}

}  // namespace dacel
