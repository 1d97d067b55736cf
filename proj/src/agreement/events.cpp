// Copyright 2026 The DSR Workbench Authors.
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

#include "dsr/agreement/events.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "dsr/util/error.hpp"

namespace dsr {

std::string to_string(const UnitKey& unit) {
  return unit.text_id + "[" + std::to_string(unit.start) + "," + std::to_string(unit.end) + ")/" +
         std::string(to_string(unit.kind)) + "/" + std::string(to_string(unit.dimension));
}

void AnnotationEvent::validate() const {
  if (annotator_id.empty()) throw ValidationError("annotation event without annotator id");
  if (text_id.empty()) throw ValidationError("annotation event without text id");
  if (!(start < end)) throw ValidationError("annotation event with empty span range");
  if (!std::isfinite(score) || score < -1.0 || score > 1.0) {
    throw ValidationError("score " + std::to_string(score) + " outside [-1, 1]");
  }
  if (!applies(kind, dimension)) {
    throw ValidationError("dimension " + std::string(to_string(dimension)) +
                          " is not scored for " + std::string(to_string(kind)) + " spans");
  }
}

jsonl::OrderedJson event_to_json(const AnnotationEvent& e) {
  jsonl::OrderedJson j;
  j["annotator"] = e.annotator_id;
  j["text_id"] = e.text_id;
  j["start"] = e.start;
  j["end"] = e.end;
  j["kind"] = std::string(to_string(e.kind));
  j["dim"] = std::string(to_string(e.dimension));
  j["score"] = e.score;
  j["ts"] = util::format_utc(e.timestamp);
  return j;
}

AnnotationEvent event_from_json(const jsonl::Json& j) {
  AnnotationEvent e;
  e.annotator_id = j.at("annotator").get<std::string>();
  e.text_id = j.at("text_id").get<std::string>();
  e.start = j.at("start").get<std::size_t>();
  e.end = j.at("end").get<std::size_t>();
  e.kind = parse_span_kind(j.at("kind").get<std::string>());
  e.dimension = parse_dimension(j.at("dim").get<std::string>());
  e.score = j.at("score").get<double>();
  e.timestamp = util::parse_utc(j.at("ts").get<std::string>());
  e.validate();
  return e;
}

std::vector<AnnotationEvent> parse_annotations(std::istream& in, const std::string& label) {
  std::vector<AnnotationEvent> out;
  jsonl::for_each_line(in, label, [&](const jsonl::Json& j, std::size_t) {
    out.push_back(event_from_json(j));
  });
  return out;
}

std::vector<AnnotationEvent> read_annotations(const std::filesystem::path& path) {
  auto in = jsonl::open_input(path);
  return parse_annotations(in, path.string());
}

void write_annotations(const std::vector<AnnotationEvent>& events, std::ostream& out) {
  for (const auto& e : events) out << event_to_json(e).dump() << '\n';
}

std::vector<AnnotationEvent> collapse_latest(const std::vector<AnnotationEvent>& events) {
  std::map<std::pair<std::string, UnitKey>, std::size_t> winner;
  for (std::size_t i = 0; i < events.size(); ++i) {
    auto key = std::make_pair(events[i].annotator_id, events[i].unit());
    auto [it, inserted] = winner.emplace(std::move(key), i);
    if (!inserted && events[i].timestamp >= events[it->second].timestamp) it->second = i;
  }
  std::vector<bool> keep(events.size(), false);
  for (const auto& [key, idx] : winner) keep[idx] = true;
  std::vector<AnnotationEvent> out;
  out.reserve(winner.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (keep[i]) out.push_back(events[i]);
  }
  return out;
}

}  // namespace dsr
