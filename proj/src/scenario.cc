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

#include "dacel/scenario.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "dacel/errors.h"

namespace dacel {
namespace {

constexpr std::uint64_t kGainStream = 1;
constexpr std::uint64_t kDatasetStream = 2;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// ---------------------------------------------------------------------------
// Minimal sectioned key = value reader.

struct Entry {
  std::size_t line = 0;
  std::string key;    // empty for bare rows
  std::string value;  // whole row for bare rows
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<Section> ReadSections(std::string_view text) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError(line_no, "malformed section header");
      }
      const std::string name(Trim(line.substr(1, line.size() - 2)));
      for (const Section& existing : sections) {
        if (existing.name == name) {
          throw ParseError(line_no, "duplicate section [" + name + "]");
        }
      }
      sections.push_back({name, line_no, {}});
      continue;
    }
    if (sections.empty()) {
      throw ParseError(line_no, "content before the first section");
    }
    Entry entry;
    entry.line = line_no;
    if (const auto eq = line.find('='); eq != std::string_view::npos) {
      entry.key = std::string(Trim(line.substr(0, eq)));
      entry.value = std::string(Trim(line.substr(eq + 1)));
      if (entry.key.empty()) throw ParseError(line_no, "empty key");
    } else {
      entry.value = std::string(line);
    }
    sections.back().entries.push_back(std::move(entry));
  }
  return sections;
}

const Section* FindSection(const std::vector<Section>& sections,
                           std::string_view name) {
  for (const Section& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

double ParseNumber(std::string_view token, std::size_t line) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "invalid number '" + std::string(token) + "'");
  }
  return v;
}

std::uint64_t ParseUnsigned(std::string_view token, std::size_t line) {
  std::uint64_t v = 0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "invalid integer '" + std::string(token) + "'");
  }
  return v;
}

std::vector<double> ParseRow(std::string_view row, std::size_t line) {
  std::vector<double> out;
  while (true) {
    row = Trim(row);
    if (row.empty()) break;
    const auto split = row.find_first_of(" \t");
    out.push_back(ParseNumber(row.substr(0, split), line));
    if (split == std::string_view::npos) break;
    row = row.substr(split);
  }
  return out;
}

const Entry& RequirePair(const Entry& e, std::string_view section) {
  if (e.key.empty()) {
    throw ParseError(e.line, "expected key = value in [" +
                                 std::string(section) + "]");
  }
  return e;
}

[[noreturn]] void UnknownKey(const Entry& e, std::string_view section) {
  throw ParseError(e.line, "unknown key '" + e.key + "' in [" +
                               std::string(section) + "]");
}

// Applies a [training] key; returns false if the key is not a training key.
bool ApplyTrainingKey(const Entry& e, TrainingParams& t) {
  if (e.key == "batch_size") {
    t.batch_size = ParseNumber(e.value, e.line);
  } else if (e.key == "compute_rate") {
    t.compute_rate = ParseNumber(e.value, e.line);
  } else if (e.key == "alpha") {
    t.alpha = ParseNumber(e.value, e.line);
  } else if (e.key == "sigma") {
    t.sigma = ParseNumber(e.value, e.line);
  } else if (e.key == "round_cap") {
    t.round_cap = static_cast<std::int64_t>(ParseUnsigned(e.value, e.line));
  } else {
    return false;
  }
  return true;
}

void ApplyTraining(const std::vector<Section>& sections, TrainingParams& t) {
  if (const Section* training = FindSection(sections, "training")) {
    for (const Entry& e : training->entries) {
      if (!ApplyTrainingKey(RequirePair(e, "training"), t)) {
        UnknownKey(e, "training");
      }
    }
  }
}

void CheckSections(const std::vector<Section>& sections,
                   std::initializer_list<std::string_view> allowed) {
  for (const Section& s : sections) {
    if (std::find(allowed.begin(), allowed.end(), s.name) == allowed.end()) {
      throw ParseError(s.line, "unknown section [" + s.name + "]");
    }
  }
}

Matrix ParseMatrix(const Section& section) {
  std::vector<std::vector<double>> rows;
  for (const Entry& e : section.entries) {
    if (!e.key.empty()) {
      throw ParseError(e.line, "expected a row of numbers in [" +
                                   section.name + "]");
    }
    rows.push_back(ParseRow(e.value, e.line));
    if (rows.back().size() != rows.front().size()) {
      throw ParseError(e.line, "row length differs from the first row in [" +
                                   section.name + "]");
    }
  }
  if (rows.empty()) {
    throw ParseError(section.line, "[" + section.name + "] has no rows");
  }
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

void AppendRow(std::ostringstream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << FormatDouble(values[i]);
  }
  out << '\n';
}

}  // namespace

std::uint64_t CounterRng::Bits(std::uint64_t stream, std::uint64_t i,
                               std::uint64_t j) const {
  std::uint64_t h = SplitMix64(seed_);
  h = SplitMix64(h ^ stream);
  h = SplitMix64(h ^ i);
  return SplitMix64(h ^ j);
}

double CounterRng::Uniform(std::uint64_t stream, std::uint64_t i,
                           std::uint64_t j) const {
  return static_cast<double>(Bits(stream, i, j) >> 11) * 0x1.0p-53;
}

void GenSpec::Validate() const {
  if (num_devices == 0) throw ValidationError("num_devices", "must be >= 1");
  if (num_channels == 0) throw ValidationError("num_channels", "must be >= 1");
  if (!(gain_min > 0.0) || !std::isfinite(gain_min)) {
    throw ValidationError("gain_min", "must be positive");
  }
  if (!(gain_min < gain_max) || !std::isfinite(gain_max)) {
    throw ValidationError("gain_max", "must exceed gain_min");
  }
  const std::pair<const char*, double> positives[] = {
      {"mean_dataset_bits", mean_dataset_bits},
      {"bits_per_sample", bits_per_sample},
      {"bandwidth", bandwidth},
      {"noise", noise},
      {"power", power}};
  for (const auto& [name, v] : positives) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(name, "must be positive");
    }
  }
  training.Validate();
}

Scenario Generate(const GenSpec& spec) {
  spec.Validate();
  const CounterRng rng(spec.seed);
  const std::size_t m_count = spec.num_devices;
  const std::size_t n_count = spec.num_channels;

  Scenario s;
  s.num_devices = m_count;
  s.num_channels = n_count;
  s.gains = Matrix(m_count, n_count);
  s.powers = Matrix(m_count, n_count, spec.power);
  s.dataset_bits.resize(m_count);
  s.sample_counts.resize(m_count);
  s.bandwidth = spec.bandwidth;
  s.noise = spec.noise;
  s.training = spec.training;

  const double log_lo = std::log(spec.gain_min);
  const double log_span = std::log(spec.gain_max) - log_lo;
  for (std::size_t m = 0; m < m_count; ++m) {
    for (std::size_t n = 0; n < n_count; ++n) {
      const double u = rng.Uniform(kGainStream, m, n);
      s.gains(m, n) = std::clamp(std::exp(log_lo + u * log_span),
                                 spec.gain_min, spec.gain_max);
    }
    const double bits =
        spec.mean_dataset_bits * (0.5 + rng.Uniform(kDatasetStream, m));
    s.dataset_bits[m] = bits;
    s.sample_counts[m] =
        std::max(1.0, std::round(bits / spec.bits_per_sample));
  }
  return s;
}

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string FormatScenario(const Scenario& s) {
  std::ostringstream out;
  out << "[radio]\n";
  out << "bandwidth = " << FormatDouble(s.bandwidth) << '\n';
  out << "noise = " << FormatDouble(s.noise) << '\n';
  if (s.deadline) out << "deadline = " << FormatDouble(*s.deadline) << '\n';
  out << "\n[training]\n";
  out << "batch_size = " << FormatDouble(s.training.batch_size) << '\n';
  out << "compute_rate = " << FormatDouble(s.training.compute_rate) << '\n';
  out << "alpha = " << FormatDouble(s.training.alpha) << '\n';
  out << "sigma = " << FormatDouble(s.training.sigma) << '\n';
  out << "round_cap = " << s.training.round_cap << '\n';
  out << "\n[devices]\n";
  out << "dataset_bits = ";
  AppendRow(out, s.dataset_bits);
  out << "sample_counts = ";
  AppendRow(out, s.sample_counts);
  out << "\n[gains]\n";
  for (std::size_t m = 0; m < s.gains.rows(); ++m) AppendRow(out, s.gains.row(m));
  out << "\n[powers]\n";
  for (std::size_t m = 0; m < s.powers.rows(); ++m) {
    AppendRow(out, s.powers.row(m));
  }
  return out.str();
}

Scenario ParseScenario(std::string_view text) {
  const std::vector<Section> sections = ReadSections(text);
  CheckSections(sections, {"radio", "training", "devices", "gains", "powers"});

  const GenSpec defaults;
  Scenario s;
  s.bandwidth = defaults.bandwidth;
  s.noise = defaults.noise;
  double power = defaults.power;

  if (const Section* radio = FindSection(sections, "radio")) {
    for (const Entry& e : radio->entries) {
      RequirePair(e, "radio");
      const double v = ParseNumber(e.value, e.line);
      if (e.key == "bandwidth") {
        s.bandwidth = v;
      } else if (e.key == "noise") {
        s.noise = v;
      } else if (e.key == "power") {
        power = v;
      } else if (e.key == "deadline") {
        s.deadline = v;
      } else {
        UnknownKey(e, "radio");
      }
    }
  }
  ApplyTraining(sections, s.training);

  const Section* gains = FindSection(sections, "gains");
  if (!gains) throw ValidationError("gains", "section [gains] is required");
  s.gains = ParseMatrix(*gains);
  s.num_devices = s.gains.rows();
  s.num_channels = s.gains.cols();

  if (const Section* powers = FindSection(sections, "powers")) {
    s.powers = ParseMatrix(*powers);
  } else {
    s.powers = Matrix(s.num_devices, s.num_channels, power);
  }

  const Section* devices = FindSection(sections, "devices");
  if (!devices) throw ValidationError("devices", "section [devices] is required");
  bool have_bits = false;
  bool have_samples = false;
  for (const Entry& e : devices->entries) {
    RequirePair(e, "devices");
    if (e.key == "dataset_bits") {
      s.dataset_bits = ParseRow(e.value, e.line);
      have_bits = true;
    } else if (e.key == "sample_counts") {
      s.sample_counts = ParseRow(e.value, e.line);
      have_samples = true;
    } else {
      UnknownKey(e, "devices");
    }
  }
  if (!have_bits) throw ValidationError("dataset_bits", "missing");
  if (!have_samples) throw ValidationError("sample_counts", "missing");

  s.Validate();
  return s;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::filesystem::filesystem_error(
        "cannot open scenario", path,
        std::make_error_code(std::errc::no_such_file_or_directory));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseScenario(buf.str());
}

void SaveScenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::filesystem::filesystem_error(
        "cannot write scenario", path,
        std::make_error_code(std::errc::permission_denied));
  }
  out << FormatScenario(s);
}

GenSpec ParseGenSpec(std::string_view text, GenSpec base) {
  const std::vector<Section> sections = ReadSections(text);
  CheckSections(sections, {"generator", "radio", "training"});
  if (const Section* gen = FindSection(sections, "generator")) {
    for (const Entry& e : gen->entries) {
      RequirePair(e, "generator");
      if (e.key == "seed") {
        base.seed = ParseUnsigned(e.value, e.line);
      } else if (e.key == "devices") {
        base.num_devices = ParseUnsigned(e.value, e.line);
      } else if (e.key == "channels") {
        base.num_channels = ParseUnsigned(e.value, e.line);
      } else if (e.key == "gain_min") {
        base.gain_min = ParseNumber(e.value, e.line);
      } else if (e.key == "gain_max") {
        base.gain_max = ParseNumber(e.value, e.line);
      } else if (e.key == "mean_dataset_bits") {
        base.mean_dataset_bits = ParseNumber(e.value, e.line);
      } else if (e.key == "bits_per_sample") {
        base.bits_per_sample = ParseNumber(e.value, e.line);
      } else {
        UnknownKey(e, "generator");
      }
    }
  }
  if (const Section* radio = FindSection(sections, "radio")) {
    for (const Entry& e : radio->entries) {
      RequirePair(e, "radio");
      if (e.key == "bandwidth") {
        base.bandwidth = ParseNumber(e.value, e.line);
      } else if (e.key == "noise") {
        base.noise = ParseNumber(e.value, e.line);
      } else if (e.key == "power") {
        base.power = ParseNumber(e.value, e.line);
      } else {
        UnknownKey(e, "radio");
      }
    }
  }
  ApplyTraining(sections, base.training);
  base.Validate();
  return base;
}

bool IsExplicitScenario(std::string_view text) {
  return FindSection(ReadSections(text), "gains") != nullptr;
}

}  // namespace dacel
