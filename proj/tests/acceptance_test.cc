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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dacel/allocators.h"
#include "dacel/core_model.h"
#include "dacel/experiment.h"
#include "dacel/protocol.h"
#include "dacel/scenario.h"
#include "testing/naive_model.h"

namespace dacel {
namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void Report(int id, const char* name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name,
              detail.c_str());
  std::fflush(stdout);
}

bool RelClose(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::string Join(const std::vector<double>& v) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s%.4f", i ? " " : "", v[i]);
    out += buf;
  }
  return out;
}

void EquationFidelity() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20261014);
  std::uniform_int_distribution<std::size_t> pick_m(1, 3), pick_n(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t mismatches = 0, checks = 0;
  auto check = [&](bool ok) {
    ++checks;
    if (!ok) ++mismatches;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t M = pick_m(rng), N = pick_n(rng);
    Scenario s = naive::RandomScenario(rng, M, N);
    const AllocationMatrix a = naive::RandomAllocation(rng, M, N);
    const auto delays = UploadDelays(s, a);
    const double max_d = *std::max_element(delays.begin(), delays.end());
    // Spread the deadline so that some instances drop datasets.
    s.deadline = std::isfinite(max_d) ? 1.5 * max_d * unit(rng) : 1.0;
    const naive::Instance x = naive::FromScenario(s, a, *s.deadline);
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t n = 0; n < N; ++n) {
        check(RelClose(InterCellInterference(s, a, m, n), naive::G(x, m, n),
                       1e-12));
        check(RelClose(IntraCellInterference(s, a, m, n),
                       naive::Gamma(x, m, n), 1e-12));
        check(RelClose(UplinkRate(s, a, m, n), naive::R(x, m, n), 1e-12));
      }
      check(RelClose(DeviceRate(s, a, m), naive::Rm(x, m), 1e-12));
      check(RelClose(UploadDelay(s, a, m), naive::D(x, m), 1e-12));
    }
    const DelayReport r = TotalDelay(s, a);
    check(RelClose(r.d_tx, naive::Dtx(x), 1e-12));
    check(RelClose(r.received_samples, naive::Received(x), 1e-12));
    check(r.k_r == naive::KR(x));
    check(RelClose(r.d_cpu_round, naive::DcpuR(x), 1e-12));
    check(RelClose(r.d_cpu, naive::Dcpu(x), 1e-12));
    check(RelClose(r.d_total, naive::Total(x), 1e-12));
  }
  const double t = Seconds(start);
  Report(1, "equation fidelity", mismatches == 0 && t < 10.0,
         std::to_string(mismatches) + " mismatches in " +
             std::to_string(checks) + " checks, " + std::to_string(t) + " s");
}

void OracleSandwich() {
  const auto start = Clock::now();
  std::size_t violations = 0, attained = 0;
  const int trials = 500;
  for (int i = 0; i < trials; ++i) {
    GenSpec gen;
    gen.seed = 100000 + static_cast<std::uint64_t>(i);
    gen.num_devices = 6;
    gen.num_channels = 3;
    const Scenario s = Generate(gen);
    const double opt = Exhaustive(s).min_max_upload_delay;
    const double dd = DdMaxH(s).max_upload_delay;
    const double maxh = MaxHGreedy(s).max_upload_delay;
    if (!(opt <= dd && dd <= maxh)) ++violations;
    if (dd == opt) ++attained;
  }
  const double t = Seconds(start);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%zu violations, dd-maxh attains optimum on %.1f%%, %.2f s",
                violations, 100.0 * attained / trials, t);
  Report(2, "oracle sandwich", violations == 0 && t < 60.0, detail);
}

void DescentTermination() {
  const auto start = Clock::now();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick_m(1, 10), pick_n(1, 8);
  const int trials = 10000;
  std::size_t converged = 0, switches = 0, bad_switches = 0;
  for (int i = 0; i < trials; ++i) {
    GenSpec gen;
    gen.seed = 500000 + static_cast<std::uint64_t>(i);
    gen.num_devices = pick_m(rng);
    gen.num_channels = pick_n(rng);
    const Scenario s = Generate(gen);
    const AllocationResult r = DdMaxH(s);
    if (r.converged) ++converged;
    const auto& h = r.max_delay_history;
    // Independent recomputation of the starting point and the end point.
    const auto start_d = UploadDelays(s, MaxHGreedy(s).alloc);
    const auto end_d = UploadDelays(s, r.alloc);
    if (h.empty() ||
        h.front() != *std::max_element(start_d.begin(), start_d.end()) ||
        h.back() != *std::max_element(end_d.begin(), end_d.end()) ||
        h.size() != r.iterations + 1) {
      ++bad_switches;
      continue;
    }
    for (std::size_t k = 1; k < h.size(); ++k) {
      ++switches;
      if (!(h[k] < h[k - 1])) ++bad_switches;
    }
  }
  const double frac = static_cast<double>(converged) / trials;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%.2f%% converged, %zu/%zu switches non-decreasing, %.2f s",
                100.0 * frac, bad_switches, switches, Seconds(start));
  Report(3, "descent termination", frac >= 0.99 && bad_switches == 0, detail);
}

// Mean of `field` per swept value for one algorithm, in sweep order.
template <typename F>
std::vector<double> Means(const std::vector<SummaryRow>& summary,
                          AllocatorKind kind, F field) {
  std::vector<double> out;
  for (const SummaryRow& s : summary) {
    if (s.algorithm == kind) out.push_back(field(s));
  }
  return out;
}

bool NonDecreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) return false;
  }
  return true;
}

bool NonIncreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

// True if `kind` has the lowest mean d_total at every swept value.
bool MinimumEverywhere(const std::vector<SummaryRow>& summary,
                       AllocatorKind kind, bool strict) {
  std::map<std::size_t, std::vector<const SummaryRow*>> by_value;
  for (const SummaryRow& s : summary) {
    by_value[s.num_devices * 1000 + s.num_channels].push_back(&s);
  }
  for (const auto& [key, cell] : by_value) {
    double mine = 0.0;
    for (const SummaryRow* s : cell) {
      if (s->algorithm == kind) mine = s->d_total.mean;
    }
    for (const SummaryRow* s : cell) {
      if (s->algorithm == kind) continue;
      if (strict ? !(mine < s->d_total.mean) : !(mine <= s->d_total.mean)) {
        return false;
      }
    }
  }
  return true;
}

std::size_t MaxHDrops(const SweepResult& result) {
  std::size_t drops = 0;
  for (const SweepRow& r : result.rows) {
    if (r.algorithm == AllocatorKind::kMaxHGreedy) drops += r.dropped_count;
  }
  return drops;
}

void Fig2(const SweepResult& result, double seconds) {
  const auto summary = Summarize(result.rows);
  bool trend = true;
  std::string detail;
  for (AllocatorKind kind : HeuristicAllocators()) {
    const auto d_tx =
        Means(summary, kind, [](const SummaryRow& s) { return s.d_tx.mean; });
    if (!NonDecreasing(d_tx)) {
      trend = false;
      detail += std::string(AllocatorName(kind)) + " d_tx " + Join(d_tx) + "; ";
    }
  }
  Report(4, "fig2 (a) mean d_tx non-decreasing in M", trend && seconds < 120,
         detail + std::to_string(seconds) + " s");
  const bool best = MinimumEverywhere(summary, AllocatorKind::kDdMaxH, true);
  Report(4, "fig2 (b) dd-maxh strictly lowest mean d_total", best,
         "dd-maxh d_total " +
             Join(Means(summary, AllocatorKind::kDdMaxH,
                        [](const SummaryRow& s) { return s.d_total.mean; })));
}

void Fig3(const SweepResult& result, double seconds) {
  const auto summary = Summarize(result.rows);
  auto total = [](const SummaryRow& s) { return s.d_total.mean; };
  const auto minh = Means(summary, AllocatorKind::kMinHGreedy, total);
  Report(5, "fig3 (a) min-h mean d_total non-decreasing in N",
         NonDecreasing(minh) && seconds < 120,
         "min-h d_total " + Join(minh) + ", " + std::to_string(seconds) +
             " s");
  const auto dd = Means(summary, AllocatorKind::kDdMaxH, total);
  const bool best = MinimumEverywhere(summary, AllocatorKind::kDdMaxH, false);
  Report(5, "fig3 (b) dd-maxh minimum and non-increasing in N",
         best && NonIncreasing(dd),
         std::string(best ? "minimum at every N" : "not minimum everywhere") +
             ", dd-maxh d_total " + Join(dd));
}

void TraceConsistency() {
  const auto start = Clock::now();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick_m(1, 8), pick_n(1, 4);
  std::uniform_int_distribution<int> pick_kind(0, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto kinds = AllAllocators();
  std::size_t replay_bad = 0, total_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const AllocatorKind kind = kinds[pick_kind(rng)];
    GenSpec gen;
    gen.seed = 900000 + static_cast<std::uint64_t>(i);
    gen.num_devices = pick_m(rng);
    gen.num_channels = pick_n(rng);
    if (kind == AllocatorKind::kExhaustive) {
      gen.num_devices = std::min<std::size_t>(gen.num_devices, 6);
    }
    Scenario s = Generate(gen);
    s.deadline = DeadlineRule(s);
    if (i % 2) *s.deadline *= 1.2 * unit(rng);
    const EventTrace trace = RunDacel(s, kind);
    if (!(Replay(trace) == trace.report)) ++replay_bad;
    if (!(TotalDelay(s, trace.allocation.alloc, *s.deadline) == trace.report)) {
      ++total_bad;
    }
  }
  Report(7, "protocol trace consistency", replay_bad == 0 && total_bad == 0,
         std::to_string(replay_bad) + " replay mismatches, " +
             std::to_string(total_bad) + " report mismatches, " +
             std::to_string(Seconds(start)) + " s");
}

int Run() {
  EquationFidelity();
  OracleSandwich();
  DescentTermination();

  auto start = Clock::now();
  const SweepResult fig2 = RunSweep(DeviceSweepSpec());
  const double fig2_seconds = Seconds(start);
  Fig2(fig2, fig2_seconds);

  start = Clock::now();
  const SweepResult fig3 = RunSweep(ChannelSweepSpec());
  Fig3(fig3, Seconds(start));

  const std::size_t drops = MaxHDrops(fig2) + MaxHDrops(fig3);
  Report(6, "deadline rule", drops == 0,
         std::to_string(drops) + " max-h datasets dropped");

  TraceConsistency();

  const bool same =
      FormatCsv(RunSweep(DeviceSweepSpec()).rows) == FormatCsv(fig2.rows);
  Report(8, "determinism", same,
         same ? "fig2 CSV byte-identical" : "fig2 CSV differs between runs");

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace dacel

int main() { return dacel::Run(); }
