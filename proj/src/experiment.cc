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

#include "dacel/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "dacel/errors.h"
#include "dacel/protocol.h"

namespace dacel {
namespace {

constexpr std::string_view kCsvHeader =
    "seed,M,N,algorithm,d_tx,d_cpu,d_total,received_samples,dropped_count,"
    "k_r,iterations,deadline,note";

std::vector<SweepRow> RunCell(const SweepSpec& spec, std::uint64_t seed,
                              std::size_t value) {
  GenSpec gen = spec.fixed;
  gen.seed = seed;
  if (spec.variable == SweepVariable::kDevices) {
    gen.num_devices = value;
  } else {
    gen.num_channels = value;
  }
  Scenario s = Generate(gen);
  s.deadline = spec.fixed_deadline ? *spec.fixed_deadline : DeadlineRule(s);

  std::vector<SweepRow> rows;
  for (AllocatorKind kind : spec.algorithms) {
    SweepRow row;
    row.seed = seed;
    row.num_devices = s.num_devices;
    row.num_channels = s.num_channels;
    row.algorithm = kind;
    row.deadline = *s.deadline;
    try {
      const EventTrace trace = RunDacel(s, kind, spec.allocator_options);
      const DelayReport& r = trace.report;
      row.d_tx = r.d_tx;
      row.d_cpu = r.d_cpu;
      row.d_total = r.d_total;
      row.received_samples = r.received_samples;
      row.dropped_count = static_cast<std::size_t>(
          std::count(r.received_mask.begin(), r.received_mask.end(), false));
      row.k_r = r.k_r;
      row.iterations = trace.allocation.iterations;
    } catch (const CapExceeded& e) {
      row.skip_reason = std::string("skipped: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  return out;
}

template <typename T>
T ParseField(std::string_view token, std::size_t line, const char* field) {
  T v{};
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string("invalid ") + field + " '" +
                               std::string(token) + "'");
  }
  return v;
}

Stats Accumulate(const std::vector<double>& values) {
  Stats st;
  if (values.empty()) return st;
  st.min = values.front();
  st.max = values.front();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    st.min = std::min(st.min, v);
    st.max = std::max(st.max, v);
  }
  st.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - st.mean) * (v - st.mean);
  st.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return st;
}

std::string Fixed(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

}  // namespace

void SweepSpec::Validate() const {
  if (values.empty()) throw ValidationError("values", "must not be empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) throw ValidationError("values", "counts must be >= 1");
    if (i && values[i] <= values[i - 1]) {
      throw ValidationError("values", "must be strictly increasing");
    }
  }
  if (algorithms.empty()) {
    throw ValidationError("algorithms", "need at least one algorithm");
  }
  if (seeds.empty()) throw ValidationError("seeds", "need at least one seed");
  if (fixed_deadline && (std::isnan(*fixed_deadline) || *fixed_deadline < 0)) {
    throw ValidationError("deadline", "must be >= 0");
  }
  fixed.Validate();
}

std::vector<std::uint64_t> SeedRange(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = first + i;
  return seeds;
}

SweepSpec DeviceSweepSpec(std::size_t num_seeds) {
  SweepSpec spec;
  spec.variable = SweepVariable::kDevices;
  spec.values = {4, 5, 6, 7, 8, 9, 10};
  spec.fixed.num_channels = 3;
  spec.algorithms = HeuristicAllocators();
  spec.seeds = SeedRange(1, num_seeds);
  return spec;
}

SweepSpec ChannelSweepSpec(std::size_t num_seeds) {
  SweepSpec spec;
  spec.variable = SweepVariable::kChannels;
  spec.values = {2, 3, 4, 6, 8, 12, 16};
  spec.fixed.num_devices = 10;
  spec.algorithms = HeuristicAllocators();
  spec.seeds = SeedRange(1, num_seeds);
  return spec;
}

SweepResult RunSweep(const SweepSpec& spec, std::size_t jobs) {
  spec.Validate();
  std::vector<std::pair<std::uint64_t, std::size_t>> cells;
  for (std::uint64_t seed : spec.seeds) {
    for (std::size_t value : spec.values) cells.emplace_back(seed, value);
  }

  std::vector<std::vector<SweepRow>> results(cells.size());
  jobs = std::clamp<std::size_t>(jobs, 1, cells.size());
  if (jobs == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      results[i] = RunCell(spec, cells[i].first, cells[i].second);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size() && !failed; i = next++) {
          try {
            results[i] = RunCell(spec, cells[i].first, cells[i].second);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  SweepResult out;
  for (auto& cell : results) {
    for (SweepRow& row : cell) out.rows.push_back(std::move(row));
  }

  std::ostringstream echo;
  echo << "variable=" << (spec.variable == SweepVariable::kDevices ? "M" : "N")
       << "\nvalues=";
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    echo << (i ? "," : "") << spec.values[i];
  }
  echo << "\nalgorithms=";
  for (std::size_t i = 0; i < spec.algorithms.size(); ++i) {
    echo << (i ? "," : "") << AllocatorName(spec.algorithms[i]);
  }
  echo << "\nseeds=";
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    echo << (i ? "," : "") << spec.seeds[i];
  }
  echo << "\ndeadline="
       << (spec.fixed_deadline ? FormatDouble(*spec.fixed_deadline) : "maxh")
       << "\ndevices=" << spec.fixed.num_devices
       << "\nchannels=" << spec.fixed.num_channels
       << "\ngain_min=" << FormatDouble(spec.fixed.gain_min)
       << "\ngain_max=" << FormatDouble(spec.fixed.gain_max)
       << "\nmean_dataset_bits=" << FormatDouble(spec.fixed.mean_dataset_bits)
       << "\nbits_per_sample=" << FormatDouble(spec.fixed.bits_per_sample)
       << "\nbandwidth=" << FormatDouble(spec.fixed.bandwidth)
       << "\nnoise=" << FormatDouble(spec.fixed.noise)
       << "\npower=" << FormatDouble(spec.fixed.power)
       << "\nbatch_size=" << FormatDouble(spec.fixed.training.batch_size)
       << "\ncompute_rate=" << FormatDouble(spec.fixed.training.compute_rate)
       << "\nalpha=" << FormatDouble(spec.fixed.training.alpha)
       << "\nsigma=" << FormatDouble(spec.fixed.training.sigma)
       << "\nround_cap=" << spec.fixed.training.round_cap << '\n';
  out.spec_echo = echo.str();
  return out;
}

std::string FormatCsv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << r.seed << ',' << r.num_devices << ',' << r.num_channels << ','
        << AllocatorName(r.algorithm) << ',';
    if (r.skipped()) {
      out << ",,,,,,," << FormatDouble(r.deadline) << ',' << r.skip_reason;
    } else {
      out << FormatDouble(r.d_tx) << ',' << FormatDouble(r.d_cpu) << ','
          << FormatDouble(r.d_total) << ','
          << FormatDouble(r.received_samples) << ',' << r.dropped_count << ','
          << r.k_r << ',' << r.iterations << ',' << FormatDouble(r.deadline)
          << ',';
    }
    out << '\n';
  }
  return out.str();
}

std::vector<SweepRow> ParseCsv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError(line_no, "unexpected header");
      header_seen = true;
      continue;
    }
    const auto f = SplitCsv(line);
    if (f.size() < 13) throw ParseError(line_no, "expected 13 fields");
    SweepRow r;
    r.seed = ParseField<std::uint64_t>(f[0], line_no, "seed");
    r.num_devices = ParseField<std::size_t>(f[1], line_no, "M");
    r.num_channels = ParseField<std::size_t>(f[2], line_no, "N");
    try {
      r.algorithm = ParseAllocatorKind(f[3]);
    } catch (const ValidationError&) {
      throw ParseError(line_no, "unknown algorithm '" + std::string(f[3]) +
                                    "'");
    }
    r.deadline = ParseField<double>(f[11], line_no, "deadline");
    // The note may itself contain commas.
    std::string note(f[12]);
    for (std::size_t i = 13; i < f.size(); ++i) {
      note += ',';
      note += f[i];
    }
    if (f[4].empty()) {
      if (note.empty()) throw ParseError(line_no, "empty row without a note");
      r.skip_reason = note;
    } else {
      r.d_tx = ParseField<double>(f[4], line_no, "d_tx");
      r.d_cpu = ParseField<double>(f[5], line_no, "d_cpu");
      r.d_total = ParseField<double>(f[6], line_no, "d_total");
      r.received_samples =
          ParseField<double>(f[7], line_no, "received_samples");
      r.dropped_count = ParseField<std::size_t>(f[8], line_no, "dropped_count");
      r.k_r = ParseField<std::int64_t>(f[9], line_no, "k_r");
      r.iterations = ParseField<std::size_t>(f[10], line_no, "iterations");
    }
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(line_no, "missing header row");
  return rows;
}

std::string FormatMetadata(const SweepResult& result) {
  return "generator=" + result.generator + "\nversion=" + result.version +
         "\n" + result.spec_echo;
}

std::vector<SummaryRow> Summarize(const std::vector<SweepRow>& rows) {
  using Key = std::tuple<std::size_t, std::size_t, AllocatorKind>;
  struct Group {
    std::vector<double> d_total, d_tx, d_cpu;
    std::size_t dropped = 0;
    std::size_t datasets = 0;
  };
  std::vector<Key> order;
  std::map<Key, Group> groups;
  for (const SweepRow& r : rows) {
    if (r.skipped()) continue;
    const Key key{r.num_devices, r.num_channels, r.algorithm};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    Group& g = it->second;
    g.d_total.push_back(r.d_total);
    g.d_tx.push_back(r.d_tx);
    g.d_cpu.push_back(r.d_cpu);
    g.dropped += r.dropped_count;
    g.datasets += r.num_devices;
  }

  std::vector<SummaryRow> out;
  for (const Key& key : order) {
    const Group& g = groups.at(key);
    SummaryRow s;
    std::tie(s.num_devices, s.num_channels, s.algorithm) = key;
    s.runs = g.d_total.size();
    s.d_total = Accumulate(g.d_total);
    s.d_tx = Accumulate(g.d_tx);
    s.d_cpu = Accumulate(g.d_cpu);
    s.drop_rate = g.datasets ? static_cast<double>(g.dropped) /
                                   static_cast<double>(g.datasets)
                             : 0.0;
    out.push_back(s);
  }
  return out;
}

std::string FormatSummaryTable(const std::vector<SummaryRow>& summary) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"M", "N", "algorithm", "runs", "d_total_mean",
                   "d_total_std", "d_total_min", "d_total_max", "d_tx_mean",
                   "d_tx_std", "d_cpu_mean", "d_cpu_std", "drop_rate"});
  for (const SummaryRow& s : summary) {
    cells.push_back({std::to_string(s.num_devices),
                     std::to_string(s.num_channels),
                     std::string(AllocatorName(s.algorithm)),
                     std::to_string(s.runs), Fixed(s.d_total.mean, 3),
                     Fixed(s.d_total.stddev, 3), Fixed(s.d_total.min, 3),
                     Fixed(s.d_total.max, 3), Fixed(s.d_tx.mean, 4),
                     Fixed(s.d_tx.stddev, 4), Fixed(s.d_cpu.mean, 3),
                     Fixed(s.d_cpu.stddev, 3), Fixed(s.drop_rate, 4)});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      // Text columns left aligned, numbers right aligned.
      const bool left = c == 2;
      const std::string pad(width[c] - row[c].size(), ' ');
      out << (left ? row[c] + pad : pad + row[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string FormatSummaryCsv(const std::vector<SummaryRow>& summary) {
  std::ostringstream out;
  out << "M,N,algorithm,runs,d_total_mean,d_total_std,d_total_min,"
         "d_total_max,d_tx_mean,d_tx_std,d_tx_min,d_tx_max,d_cpu_mean,"
         "d_cpu_std,d_cpu_min,d_cpu_max,drop_rate\n";
  for (const SummaryRow& s : summary) {
    out << s.num_devices << ',' << s.num_channels << ','
        << AllocatorName(s.algorithm) << ',' << s.runs;
    for (const Stats* st : {&s.d_total, &s.d_tx, &s.d_cpu}) {
      out << ',' << FormatDouble(st->mean) << ',' << FormatDouble(st->stddev)
          << ',' << FormatDouble(st->min) << ',' << FormatDouble(st->max);
    }
    out << ',' << FormatDouble(s.drop_rate) << '\n';
  }
  return out.str();
}

}  // namespace dacel
