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

#include "dacel/protocol.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "dacel/errors.h"

namespace dacel {
namespace {

// Replay accepts clock jitter up to this much (absolute, or relative for
// large times).
constexpr double kTimeTolerance = 1e-9;

bool Close(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= kTimeTolerance * std::max(1.0, std::abs(b));
}

[[noreturn]] void Invalid(const std::string& what) {
  throw ValidationError("trace", what);
}

std::string JoinChannels(const std::vector<std::size_t>& channels) {
  std::string out;
  for (std::size_t m = 0; m < channels.size(); ++m) {
    if (m) out += ',';
    out += std::to_string(channels[m]);
  }
  return out;
}

std::string FormatNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string ActorName(const Actor& actor) {
  switch (actor.type) {
    case ActorType::kEdgeServer:
      return "edge_server";
    case ActorType::kBaseStation:
      return "base_station";
    case ActorType::kDevice:
      return "device:" + std::to_string(actor.device);
  }
  return "unknown";
}

}  // namespace

std::size_t Actor::Rank() const {
  switch (type) {
    case ActorType::kEdgeServer:
      return 0;
    case ActorType::kBaseStation:
      return 1;
    case ActorType::kDevice:
      return 2 + device;
  }
  return 0;
}

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kCollectionRequest:
      return "COLLECTION_REQUEST";
    case EventKind::kChannelRequest:
      return "CHANNEL_REQUEST";
    case EventKind::kAllocationDecision:
      return "ALLOCATION_DECISION";
    case EventKind::kUploadStart:
      return "UPLOAD_START";
    case EventKind::kUploadComplete:
      return "UPLOAD_COMPLETE";
    case EventKind::kDatasetDropped:
      return "DATASET_DROPPED";
    case EventKind::kAggregationDone:
      return "AGGREGATION_DONE";
    case EventKind::kTrainingDone:
      return "TRAINING_DONE";
    case EventKind::kResultFeedback:
      return "RESULT_FEEDBACK";
  }
  return "UNKNOWN";
}

double ProtocolEvent::Number(std::string_view key) const {
  for (const auto& [k, v] : payload) {
    if (k != key) continue;
    if (const double* d = std::get_if<double>(&v)) return *d;
    Invalid(std::string(EventKindName(kind)) + " payload '" +
            std::string(key) + "' is not numeric");
  }
  Invalid(std::string(EventKindName(kind)) + " payload lacks '" +
          std::string(key) + "'");
}

double DeadlineRule(const Scenario& s) {
  return MaxHGreedy(s).max_upload_delay;
}

EventTrace RunDacel(const Scenario& s, AllocatorKind kind,
                    const AllocatorOptions& options) {
  if (!s.deadline) throw ConfigError("collection deadline is not set");
  const double deadline = *s.deadline;
  const std::size_t devices = s.num_devices;

  EventTrace trace;
  trace.allocation = Allocate(kind, s, options);
  trace.report = TotalDelay(s, trace.allocation.alloc);
  const DelayReport& r = trace.report;
  const std::vector<std::size_t> channels = trace.allocation.alloc.Channels();

  auto& ev = trace.events;
  const auto server = Actor::EdgeServer();
  ev.push_back({0.0, server, EventKind::kCollectionRequest,
                {{"devices", static_cast<double>(devices)},
                 {"deadline", deadline}}});
  for (std::size_t m = 0; m < devices; ++m) {
    ev.push_back({0.0, Actor::Device(m), EventKind::kChannelRequest,
                  {{"dataset_bits", s.dataset_bits[m]}}});
  }
  ev.push_back({0.0, Actor::BaseStation(), EventKind::kAllocationDecision,
                {{"algorithm", std::string(AllocatorName(kind))},
                 {"channels", JoinChannels(channels)}}});
  for (std::size_t m = 0; m < devices; ++m) {
    ev.push_back({0.0, Actor::Device(m), EventKind::kUploadStart,
                  {{"channel", static_cast<double>(channels[m])},
                   {"bits", s.dataset_bits[m]}}});
  }
  std::size_t dropped = 0;
  for (std::size_t m = 0; m < devices; ++m) {
    const double delay = r.per_device_delay[m];
    if (r.received_mask[m]) {
      ev.push_back({delay, Actor::Device(m), EventKind::kUploadComplete,
                    {{"samples", s.sample_counts[m]}, {"delay", delay}}});
    } else {
      ++dropped;
      ev.push_back({deadline, Actor::Device(m), EventKind::kDatasetDropped,
                    {{"samples", s.sample_counts[m]}, {"delay", delay}}});
    }
  }
  ev.push_back({r.d_tx, server, EventKind::kAggregationDone,
                {{"received_samples", r.received_samples},
                 {"dropped", static_cast<double>(dropped)}}});
  ev.push_back({r.d_total, server, EventKind::kTrainingDone,
                {{"rounds", static_cast<double>(r.k_r)},
                 {"round_delay", r.d_cpu_round}}});
  ev.push_back({r.d_total, server, EventKind::kResultFeedback,
                {{"d_total", r.d_total}}});

  std::stable_sort(ev.begin(), ev.end(),
                   [](const ProtocolEvent& a, const ProtocolEvent& b) {
                     if (a.time != b.time) return a.time < b.time;
                     if (a.kind != b.kind) return a.kind < b.kind;
                     return a.actor.Rank() < b.actor.Rank();
                   });
  return trace;
}

DelayReport Replay(const EventTrace& trace) {
  const auto& ev = trace.events;
  if (ev.empty()) Invalid("trace is empty");
  if (ev.front().kind != EventKind::kCollectionRequest) {
    Invalid("first event is not COLLECTION_REQUEST");
  }
  if (!Close(ev.front().time, 0.0)) {
    Invalid("COLLECTION_REQUEST is not at time 0");
  }
  const double devices_value = ev.front().Number("devices");
  const double deadline = ev.front().Number("deadline");
  if (!(devices_value >= 1.0) || devices_value != std::floor(devices_value)) {
    Invalid("COLLECTION_REQUEST device count is invalid");
  }
  const auto devices = static_cast<std::size_t>(devices_value);

  std::vector<int> channel_requests(devices, 0);
  std::vector<int> upload_starts(devices, 0);
  std::vector<int> outcomes(devices, 0);
  int singletons[9] = {};
  const ProtocolEvent* aggregation = nullptr;
  const ProtocolEvent* training = nullptr;
  const ProtocolEvent* feedback = nullptr;

  DelayReport report;
  std::vector<double> samples(devices, 0.0);
  report.per_device_delay.assign(devices, 0.0);
  report.received_mask.assign(devices, false);

  for (std::size_t i = 0; i < ev.size(); ++i) {
    const ProtocolEvent& e = ev[i];
    const std::string name(EventKindName(e.kind));
    if (i > 0) {
      if (e.time < ev[i - 1].time && !Close(e.time, ev[i - 1].time)) {
        Invalid("event " + std::to_string(i) + " (" + name +
                ") goes back in time");
      }
      if (e.kind < ev[i - 1].kind) {
        Invalid("event " + std::to_string(i) + " (" + name +
                ") is out of protocol order");
      }
    }
    const bool per_device = e.kind == EventKind::kChannelRequest ||
                            e.kind == EventKind::kUploadStart ||
                            e.kind == EventKind::kUploadComplete ||
                            e.kind == EventKind::kDatasetDropped;
    if (per_device) {
      if (e.actor.type != ActorType::kDevice || e.actor.device >= devices) {
        Invalid(name + " at event " + std::to_string(i) +
                " has no valid device actor");
      }
    } else {
      ++singletons[static_cast<int>(e.kind)];
    }
    const std::size_t m = e.actor.device;
    switch (e.kind) {
      case EventKind::kChannelRequest:
        ++channel_requests[m];
        break;
      case EventKind::kUploadStart:
        ++upload_starts[m];
        if (!Close(e.time, 0.0)) Invalid("UPLOAD_START is not at time 0");
        break;
      case EventKind::kUploadComplete:
        ++outcomes[m];
        report.per_device_delay[m] = e.time;
        report.received_mask[m] = true;
        samples[m] = e.Number("samples");
        break;
      case EventKind::kDatasetDropped:
        ++outcomes[m];
        report.per_device_delay[m] = e.Number("delay");
        if (!Close(e.time, deadline)) {
          Invalid("DATASET_DROPPED for device " + std::to_string(m) +
                  " is not at the deadline");
        }
        break;
      case EventKind::kAggregationDone:
        aggregation = &e;
        break;
      case EventKind::kTrainingDone:
        training = &e;
        break;
      case EventKind::kResultFeedback:
        feedback = &e;
        break;
      default:
        break;
    }
  }

  for (EventKind k : {EventKind::kCollectionRequest,
                      EventKind::kAllocationDecision,
                      EventKind::kAggregationDone, EventKind::kTrainingDone,
                      EventKind::kResultFeedback}) {
    if (singletons[static_cast<int>(k)] != 1) {
      Invalid("expected exactly one " + std::string(EventKindName(k)));
    }
  }
  for (std::size_t m = 0; m < devices; ++m) {
    const std::string dev = "device " + std::to_string(m);
    if (channel_requests[m] != 1) {
      Invalid(dev + " needs exactly one CHANNEL_REQUEST");
    }
    if (upload_starts[m] != 1) Invalid(dev + " needs exactly one UPLOAD_START");
    if (outcomes[m] != 1) {
      Invalid(dev + " needs exactly one UPLOAD_COMPLETE or DATASET_DROPPED");
    }
    if (report.received_mask[m] && report.per_device_delay[m] > deadline &&
        !Close(report.per_device_delay[m], deadline)) {
      Invalid(dev + " completed after the deadline");
    }
    if (!report.received_mask[m] && !(report.per_device_delay[m] > deadline)) {
      Invalid(dev + " was dropped before the deadline");
    }
  }

  // Device order, matching the summation order of TotalDelay.
  for (std::size_t m = 0; m < devices; ++m) {
    if (report.received_mask[m]) report.received_samples += samples[m];
  }
  double worst = 0.0;
  for (double d : report.per_device_delay) worst = std::max(worst, d);
  report.d_tx = aggregation->time;
  if (!Close(report.d_tx, std::min(worst, deadline))) {
    Invalid("AGGREGATION_DONE time differs from min(max delay, deadline)");
  }
  if (!Close(aggregation->Number("received_samples"),
             report.received_samples)) {
    Invalid("AGGREGATION_DONE sample tally differs from completed uploads");
  }

  report.k_r = static_cast<std::int64_t>(training->Number("rounds"));
  report.no_data = report.received_samples == 0.0;
  report.d_cpu_round = report.no_data ? 0.0 : training->Number("round_delay");
  report.d_cpu = report.no_data
                     ? 0.0
                     : static_cast<double>(report.k_r) * report.d_cpu_round;
  report.d_total = report.d_tx + report.d_cpu;
  if (!Close(training->time, report.d_total)) {
    Invalid("TRAINING_DONE time differs from aggregation plus training");
  }
  if (!Close(feedback->time, report.d_total)) {
    Invalid("RESULT_FEEDBACK time differs from the total delay");
  }
  return report;
}

std::string SerializeTrace(const EventTrace& trace) {
  std::ostringstream out;
  for (const ProtocolEvent& e : trace.events) {
    out << FormatNumber(e.time) << '\t' << ActorName(e.actor) << '\t'
        << EventKindName(e.kind);
    for (const auto& [key, value] : e.payload) {
      out << '\t' << key << '=';
      if (const double* d = std::get_if<double>(&value)) {
        out << FormatNumber(*d);
      } else {
        out << std::get<std::string>(value);
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dacel
