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

#include <cmath>

#include "dacel/errors.h"
#include "dacel/protocol.h"
#include "gtest/gtest.h"

namespace dacel {
namespace {

SweepSpec SmallSpec() {
  SweepSpec spec;
  spec.variable = SweepVariable::kDevices;
  spec.values = {3, 5};
  spec.algorithms = HeuristicAllocators();
  spec.seeds = {1, 2, 3};
  return spec;
}

SweepRow Row(double d_total, double d_tx, double d_cpu, std::size_t dropped) {
  SweepRow r;
  r.num_devices = 4;
  r.num_channels = 3;
  r.d_total = d_total;
  r.d_tx = d_tx;
  r.d_cpu = d_cpu;
  r.dropped_count = dropped;
  return r;
}

TEST(RunSweepTest, SingleCellMatchesDirectRun) {
  SweepSpec spec;
  spec.values = {6};
  spec.algorithms = {AllocatorKind::kSpdm};
  spec.seeds = {77};
  const SweepResult result = RunSweep(spec);
  ASSERT_EQ(result.rows.size(), 1u);

  GenSpec gen;
  gen.seed = 77;
  gen.num_devices = 6;
  Scenario s = Generate(gen);
  s.deadline = DeadlineRule(s);
  const EventTrace t = RunDacel(s, AllocatorKind::kSpdm);
  const SweepRow& row = result.rows[0];
  EXPECT_EQ(row.d_total, t.report.d_total);
  EXPECT_EQ(row.d_tx, t.report.d_tx);
  EXPECT_EQ(row.d_cpu, t.report.d_cpu);
  EXPECT_EQ(row.received_samples, t.report.received_samples);
  EXPECT_EQ(row.k_r, t.report.k_r);
  EXPECT_EQ(row.deadline, *s.deadline);
  EXPECT_EQ(result.generator, kGeneratorName);
}

TEST(RunSweepTest, RowOrderAndCount) {
  const SweepSpec spec = SmallSpec();
  const SweepResult result = RunSweep(spec);
  ASSERT_EQ(result.rows.size(), 3u * 2u * 4u);
  std::size_t i = 0;
  for (std::uint64_t seed : spec.seeds) {
    for (std::size_t m : spec.values) {
      for (AllocatorKind kind : spec.algorithms) {
        const SweepRow& r = result.rows[i++];
        EXPECT_EQ(r.seed, seed);
        EXPECT_EQ(r.num_devices, m);
        EXPECT_EQ(r.algorithm, kind);
      }
    }
  }
}

TEST(RunSweepTest, SharedDeadlineAndNoMaxHDrops) {
  const SweepResult result = RunSweep(SmallSpec());
  for (std::size_t i = 0; i < result.rows.size(); i += 4) {
    for (std::size_t k = 1; k < 4; ++k) {
      EXPECT_EQ(result.rows[i + k].deadline, result.rows[i].deadline);
    }
  }
  for (const SweepRow& r : result.rows) {
    if (r.algorithm == AllocatorKind::kMaxHGreedy) {
      EXPECT_EQ(r.dropped_count, 0u);
    }
  }
}

TEST(RunSweepTest, FixedDeadlinePolicy) {
  SweepSpec spec = SmallSpec();
  spec.fixed_deadline = 0.0;
  for (const SweepRow& r : RunSweep(spec).rows) {
    EXPECT_EQ(r.deadline, 0.0);
    EXPECT_EQ(r.dropped_count, r.num_devices);
    EXPECT_EQ(r.d_total, 0.0);
  }
}

TEST(RunSweepTest, ExhaustiveRefusalBecomesSkippedRow) {
  SweepSpec spec;
  spec.values = {4, 14};
  spec.algorithms = {AllocatorKind::kExhaustive, AllocatorKind::kDdMaxH};
  spec.seeds = {1};
  const SweepResult result = RunSweep(spec);
  ASSERT_EQ(result.rows.size(), 4u);
  EXPECT_FALSE(result.rows[0].skipped());
  EXPECT_TRUE(result.rows[2].skipped());
  EXPECT_FALSE(result.rows[3].skipped());
  EXPECT_NE(result.rows[2].skip_reason.find("exhaustive"), std::string::npos);

  const auto parsed = ParseCsv(FormatCsv(result.rows));
  EXPECT_EQ(parsed, result.rows);
  EXPECT_EQ(Summarize(result.rows).size(), 3u);
}

TEST(RunSweepTest, ParallelMatchesSequential) {
  const SweepSpec spec = SmallSpec();
  EXPECT_EQ(FormatCsv(RunSweep(spec, 4).rows), FormatCsv(RunSweep(spec).rows));
}

TEST(RunSweepTest, RejectsInvalidSpecs) {
  SweepSpec spec = SmallSpec();
  spec.values = {5, 3};
  EXPECT_THROW(RunSweep(spec), ValidationError);
  spec = SmallSpec();
  spec.seeds.clear();
  EXPECT_THROW(RunSweep(spec), ValidationError);
  spec = SmallSpec();
  spec.algorithms.clear();
  EXPECT_THROW(RunSweep(spec), ValidationError);
}

TEST(CsvTest, RoundTripAndHeader) {
  const SweepResult result = RunSweep(SmallSpec());
  const std::string csv = FormatCsv(result.rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "seed,M,N,algorithm,d_tx,d_cpu,d_total,received_samples,"
            "dropped_count,k_r,iterations,deadline,note");
  EXPECT_EQ(ParseCsv(csv), result.rows);
  EXPECT_THROW(ParseCsv("seed,M\n1,2\n"), ParseError);
  EXPECT_THROW(ParseCsv(csv + "1,2,3,best,,,,,,,,1,\n"), ParseError);
}

TEST(SummarizeTest, SingleRow) {
  const auto s = Summarize({Row(10, 1, 9, 1)});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].d_total.mean, 10);
  EXPECT_EQ(s[0].d_total.stddev, 0);
  EXPECT_EQ(s[0].drop_rate, 0.25);
}

TEST(SummarizeTest, IdenticalRowsHaveZeroSpread) {
  const auto s = Summarize({Row(10, 1, 9, 0), Row(10, 1, 9, 0)});
  EXPECT_EQ(s[0].d_total.stddev, 0);
  EXPECT_EQ(s[0].runs, 2u);
}

TEST(SummarizeTest, ThreeRowFixture) {
  // d_total 10, 20, 60: mean 30, population variance (400+100+900)/3.
  const auto s = Summarize(
      {Row(10, 1, 9, 0), Row(20, 2, 18, 1), Row(60, 3, 57, 2)});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].d_total.mean, 30.0);
  EXPECT_DOUBLE_EQ(s[0].d_total.stddev, std::sqrt(1400.0 / 3.0));
  EXPECT_EQ(s[0].d_total.min, 10.0);
  EXPECT_EQ(s[0].d_total.max, 60.0);
  EXPECT_DOUBLE_EQ(s[0].d_tx.mean, 2.0);
  EXPECT_DOUBLE_EQ(s[0].d_cpu.mean, 28.0);
  EXPECT_DOUBLE_EQ(s[0].drop_rate, 3.0 / 12.0);
  const std::string table = FormatSummaryTable(s);
  EXPECT_NE(table.find("30.000"), std::string::npos);
  const std::string csv = FormatSummaryCsv(s);
  EXPECT_NE(csv.find("4,3,dd-maxh,3,30,"), std::string::npos);
}

TEST(MetadataTest, EchoesGeneratorAndSpec) {
  const std::string meta = FormatMetadata(RunSweep(SmallSpec()));
  EXPECT_NE(meta.find("generator=splitmix64-counter-v1"), std::string::npos);
  EXPECT_NE(meta.find("version=" + std::string(kVersion)), std::string::npos);
  EXPECT_NE(meta.find("values=3,5"), std::string::npos);
  EXPECT_NE(meta.find("deadline=maxh"), std::string::npos);
}

}  // namespace
}  // namespace dacel
