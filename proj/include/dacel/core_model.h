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

// Interference, rate and delay model of a MIMO-NOMA uplink feeding an edge
// learning server.
//
// A device m transmitting on channel n sees interference from every other
// device whose received gain is strictly below its own gain h(m, n):
// devices on other channels (the "inter-cell" term G) and devices sharing
// channel n (the "intra-cell" term gamma). The rate is Shannon capacity over
// that SINR, the upload delay is dataset size over rate, and the learning
// delay adds a training phase whose round count shrinks with the number of
// samples that arrived before the collection deadline.

#ifndef DACEL_CORE_MODEL_H_
#define DACEL_CORE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dacel {

// Dense row-major matrix of doubles, rows = devices, cols = channels.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Round-count model K_R = ceil(alpha / samples^sigma), clamped to
// [1, round_cap].
struct TrainingParams {
  // Value that yields K_R = 20 at 4.8e4 received samples with sigma = 1.2.
  static double DefaultAlpha();

  double batch_size = 100.0;     // samples per batch
  double compute_rate = 1000.0;  // samples per second
  double alpha = DefaultAlpha();
  double sigma = 1.2;
  std::int64_t round_cap = 1000;

  // Throws ValidationError naming the offending field.
  void Validate() const;

  bool operator==(const TrainingParams&) const = default;
};

struct Scenario {
  std::size_t num_devices = 0;
  std::size_t num_channels = 0;
  Matrix gains;   // dimensionless power gain h(m, n) > 0
  Matrix powers;  // watts
  std::vector<double> dataset_bits;   // L_m
  std::vector<double> sample_counts;  // W_m
  double bandwidth = 5.0e6;  // Hz, per channel
  double noise = 1.0e-10;    // watts
  std::optional<double> deadline;  // collection deadline, seconds
  TrainingParams training;

  // Checks shapes and positivity. Throws ValidationError naming the field.
  void Validate() const;

  bool operator==(const Scenario&) const = default;
};

// Binary device-by-channel decision matrix. Rows are expected to be one-hot
// once allocation is complete; all-zero rows represent unplaced devices.
class AllocationMatrix {
 public:
  AllocationMatrix() = default;
  AllocationMatrix(std::size_t num_devices, std::size_t num_channels)
      : num_devices_(num_devices),
        num_channels_(num_channels),
        entries_(num_devices * num_channels, 0) {}

  // One-hot matrix with device m on channels[m].
  static AllocationMatrix FromChannels(std::span<const std::size_t> channels,
                                       std::size_t num_channels);

  std::size_t num_devices() const { return num_devices_; }
  std::size_t num_channels() const { return num_channels_; }

  bool at(std::size_t m, std::size_t n) const {
    return entries_[m * num_channels_ + n] != 0;
  }
  // Raw entry write; may break the one-hot property.
  void Set(std::size_t m, std::size_t n, bool value) {
    entries_[m * num_channels_ + n] = value ? 1 : 0;
  }
  // Makes row m one-hot on channel n.
  void Assign(std::size_t m, std::size_t n);
  void ClearRow(std::size_t m);

  // Channel of device m if its row is one-hot.
  std::optional<std::size_t> ChannelOf(std::size_t m) const;
  bool IsComplete() const;
  // Per-device channel list. Throws ContractViolation unless IsComplete().
  std::vector<std::size_t> Channels() const;

  bool operator==(const AllocationMatrix&) const = default;

 private:
  std::size_t num_devices_ = 0;
  std::size_t num_channels_ = 0;
  std::vector<std::uint8_t> entries_;
};

struct DelayReport {
  std::vector<double> per_device_delay;  // +inf when the rate is zero
  double d_tx = 0.0;
  std::vector<bool> received_mask;
  double received_samples = 0.0;
  std::int64_t k_r = 0;
  double d_cpu_round = 0.0;  // one pass over the received samples
  double d_cpu = 0.0;
  double d_total = 0.0;
  bool no_data = false;  // nothing arrived before the deadline

  bool operator==(const DelayReport&) const = default;
};

// Interference from lower-gain devices on channels other than n.
double InterCellInterference(const Scenario& s, const AllocationMatrix& alloc,
                             std::size_t m, std::size_t n);
// Interference from lower-gain devices sharing channel n.
double IntraCellInterference(const Scenario& s, const AllocationMatrix& alloc,
                             std::size_t m, std::size_t n);
// Bits per second from device m over channel n; 0 when not allocated.
double UplinkRate(const Scenario& s, const AllocationMatrix& alloc,
                  std::size_t m, std::size_t n);
double DeviceRate(const Scenario& s, const AllocationMatrix& alloc,
                  std::size_t m);
// L_m / R_m, or +inf when the device has no rate.
double UploadDelay(const Scenario& s, const AllocationMatrix& alloc,
                   std::size_t m);
std::vector<double> UploadDelays(const Scenario& s,
                                 const AllocationMatrix& alloc);

struct SystemUpload {
  double d_tx = 0.0;
  std::vector<bool> received_mask;
};

// Deadline-capped collection time. Throws ConfigError if s.deadline is unset.
SystemUpload SystemUploadDelay(const Scenario& s,
                               const AllocationMatrix& alloc);
SystemUpload SystemUploadDelay(std::span<const double> delays,
                               double deadline);

struct TrainingCost {
  std::int64_t k_r = 0;
  double d_cpu_round = 0.0;
  double d_cpu = 0.0;
  bool no_data = false;
};

// With zero received samples, K_R is round_cap and no time is spent.
TrainingCost TrainingDelay(const TrainingParams& params,
                           double received_samples);
inline TrainingCost TrainingDelay(const Scenario& s, double received_samples) {
  return TrainingDelay(s.training, received_samples);
}

// Full learning delay. Throws ContractViolation on a non one-hot row and
// ConfigError when no deadline is set.
DelayReport TotalDelay(const Scenario& s, const AllocationMatrix& alloc);
// Same, against an explicit deadline instead of s.deadline.
DelayReport TotalDelay(const Scenario& s, const AllocationMatrix& alloc,
                       double deadline);

}  // namespace dacel

#endif  // DACEL_CORE_MODEL_H_
