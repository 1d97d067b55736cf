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

#include "dsr/service/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <tuple>

#include "dsr/core/utf8.hpp"

namespace dsr::service {

struct AnnotationService::Loaded {
  Corpus corpus;
  std::vector<AnnotationTask> tasks;
};

struct AnnotationService::Snapshot {
  std::shared_ptr<const Loaded> loaded;
  // Units each annotator has scored at least once, across every corpus.
  std::map<std::string, std::shared_ptr<const std::set<UnitKey>>> done;
  std::uint64_t log_bytes = 0;
};

namespace {

UnitKey unit_of(const AnnotationTask& task, Dimension d) {
  return {task.text_id, task.start, task.end, task.kind, d};
}

bool task_complete(const AnnotationTask& task, const std::set<UnitKey>* done) {
  if (done == nullptr) return false;
  for (Dimension d : task.dimensions) {
    if (!done->count(unit_of(task, d))) return false;
  }
  return true;
}

std::vector<AnnotationTask> build_tasks(const Corpus& corpus) {
  std::map<std::string_view, std::size_t> text_index;
  for (std::size_t i = 0; i < corpus.texts.size(); ++i) text_index.emplace(corpus.texts[i].id, i);
  std::vector<const ScoredSpan*> order;
  for (const auto& s : corpus.spans) order.push_back(&s);
  auto key = [&](const ScoredSpan* s) {
    return std::tuple(text_index.at(s->span.text_id), s->span.start, s->span.kind, s->span.end);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](const ScoredSpan* a, const ScoredSpan* b) { return key(a) < key(b); });

  std::vector<AnnotationTask> tasks;
  std::set<SpanKey> seen;
  for (const ScoredSpan* s : order) {
    if (!seen.insert(SpanKey::of(s->span)).second) continue;
    AnnotationTask t;
    t.task_id = std::to_string(tasks.size());
    t.text_id = s->span.text_id;
    t.content = corpus.texts[text_index.at(s->span.text_id)].content;
    t.start = s->span.start;
    t.end = s->span.end;
    t.kind = s->span.kind;
    t.surface = s->span.surface;
    for (Dimension d : kAllDimensions) {
      if (applies(t.kind, d)) t.dimensions.push_back(d);
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::string read_prefix(const std::filesystem::path& path, std::uint64_t bytes) {
  if (bytes == 0) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read annotation log " + path.string());
  std::string out(bytes, '\0');
  in.read(out.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<std::uint64_t>(in.gcount()) != bytes) {
    throw Error("annotation log " + path.string() + " is shorter than expected");
  }
  return out;
}

std::vector<AnnotationEvent> parse_log(const std::string& text, const std::string& label) {
  std::istringstream in(text);
  return parse_annotations(in, label);
}

}  // namespace

jsonl::OrderedJson task_to_json(const AnnotationTask& task) {
  jsonl::OrderedJson j;
  j["task_id"] = task.task_id;
  j["text_id"] = task.text_id;
  j["content"] = task.content;
  j["start"] = task.start;
  j["end"] = task.end;
  j["kind"] = std::string(to_string(task.kind));
  j["surface"] = task.surface;
  auto dims = jsonl::OrderedJson::array();
  for (Dimension d : task.dimensions) dims.push_back(std::string(to_string(d)));
  j["dimensions"] = std::move(dims);
  jsonl::OrderedJson scored;
  for (Dimension d : task.dimensions) {
    scored[std::string(to_string(d))] = task.scored[static_cast<std::size_t>(d)];
  }
  j["scored"] = std::move(scored);
  return j;
}

jsonl::OrderedJson progress_to_json(const Progress& p) {
  jsonl::OrderedJson j;
  j["tasks"] = p.tasks;
  auto annotators = jsonl::OrderedJson::object();
  for (const auto& [id, s] : p.sessions) {
    jsonl::OrderedJson a;
    a["completed"] = s.completed;
    a["position"] = s.position;
    const auto& units = p.scored_units.at(id);
    a["units"] = {{"OA", units[0]}, {"VA", units[1]}, {"HH", units[2]}};
    annotators[id] = std::move(a);
  }
  j["annotators"] = std::move(annotators);
  j["per_dimension"] = {
      {"OA", p.per_dimension[0]}, {"VA", p.per_dimension[1]}, {"HH", p.per_dimension[2]}};
  return j;
}

AnnotationService::AnnotationService(std::filesystem::path log_path, Clock clock)
    : log_path_(std::move(log_path)), clock_(std::move(clock)) {
  if (log_path_.has_parent_path()) std::filesystem::create_directories(log_path_.parent_path());
  fd_ = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error("cannot open annotation log " + log_path_.string() + ": " + std::strerror(errno));
  }

  std::string text = read_prefix(log_path_, std::filesystem::file_size(log_path_));
  const auto last_newline = text.rfind('\n');
  const std::size_t complete = last_newline == std::string::npos ? 0 : last_newline + 1;
  if (complete != text.size()) {
    if (::ftruncate(fd_, static_cast<off_t>(complete)) != 0 || ::fsync(fd_) != 0) {
      throw Error("cannot truncate partial record in " + log_path_.string());
    }
    text.resize(complete);
  }

  auto snap = std::make_shared<Snapshot>();
  snap->log_bytes = complete;
  std::map<std::string, std::set<UnitKey>> done;
  for (const auto& e : parse_log(text, log_path_.string())) done[e.annotator_id].insert(e.unit());
  for (auto& [id, units] : done) {
    snap->done.emplace(id, std::make_shared<const std::set<UnitKey>>(std::move(units)));
  }
  current_ = std::move(snap);
}

AnnotationService::~AnnotationService() {
  if (fd_ >= 0) ::close(fd_);
}

std::shared_ptr<const AnnotationService::Snapshot> AnnotationService::snapshot() const {
  return std::atomic_load(&current_);
}

void AnnotationService::publish(std::shared_ptr<const Snapshot> next) {
  std::atomic_store(&current_, std::move(next));
}

void AnnotationService::append_line(const std::string& line) {
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error("annotation log write failed: " + std::string(std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) {
    throw Error("annotation log fsync failed: " + std::string(std::strerror(errno)));
  }
}

void AnnotationService::load_corpus(Corpus corpus) {
  corpus.validate();
  auto loaded = std::make_shared<Loaded>();
  loaded->tasks = build_tasks(corpus);
  loaded->corpus = std::move(corpus);

  std::lock_guard lock(writer_);
  const auto snap = snapshot();
  if (snap->loaded) {
    for (const auto& [annotator, units] : snap->done) {
      std::size_t finished = 0;
      bool started = false;
      for (const auto& task : snap->loaded->tasks) {
        if (task_complete(task, units.get())) ++finished;
        for (Dimension d : task.dimensions) started = started || units->count(unit_of(task, d));
      }
      if (started && finished < snap->loaded->tasks.size()) {
        throw Conflict("annotator '" + annotator + "' has an unfinished session on corpus '" +
                       snap->loaded->corpus.name + "'");
      }
    }
  }
  auto next = std::make_shared<Snapshot>(*snap);
  next->loaded = std::move(loaded);
  publish(std::move(next));
}

jsonl::OrderedJson AnnotationService::corpora() const {
  const auto snap = snapshot();
  auto arr = jsonl::OrderedJson::array();
  if (snap->loaded) {
    const auto& c = snap->loaded->corpus;
    arr.push_back({{"name", c.name},
                   {"texts", c.texts.size()},
                   {"spans", c.spans.size()},
                   {"tasks", snap->loaded->tasks.size()}});
  }
  return arr;
}

std::optional<AnnotationTask> AnnotationService::next_task(const std::string& annotator) const {
  if (annotator.empty()) throw ValidationError("annotator id is required");
  const auto snap = snapshot();
  if (!snap->loaded) throw NotFound("no corpus is loaded");
  auto it = snap->done.find(annotator);
  const std::set<UnitKey>* done = it == snap->done.end() ? nullptr : it->second.get();
  for (const auto& task : snap->loaded->tasks) {
    if (task_complete(task, done)) continue;
    AnnotationTask out = task;
    for (Dimension d : task.dimensions) {
      out.scored[static_cast<std::size_t>(d)] = done != nullptr && done->count(unit_of(task, d));
    }
    return out;
  }
  return std::nullopt;
}

AnnotationEvent AnnotationService::submit_score(const std::string& annotator,
                                                const std::string& task_id,
                                                const std::string& dimension, double score) {
  if (annotator.empty()) throw ValidationError("annotator id is required");
  utf8::decode(annotator);

  std::lock_guard lock(writer_);
  const auto snap = snapshot();
  if (!snap->loaded) throw NotFound("no corpus is loaded");
  std::size_t index = 0;
  const auto& tasks = snap->loaded->tasks;
  const auto parsed = std::from_chars(task_id.data(), task_id.data() + task_id.size(), index);
  if (task_id.empty() || parsed.ec != std::errc{} || parsed.ptr != task_id.data() + task_id.size() ||
      index >= tasks.size()) {
    throw NotFound("unknown task '" + task_id + "'");
  }
  const AnnotationTask& task = tasks[index];
  const Dimension dim = parse_dimension(dimension);
  if (!applies(task.kind, dim)) {
    throw ValidationError("dimension " + std::string(to_string(dim)) + " does not apply to a " +
                          std::string(to_string(task.kind)) + " span");
  }
  if (!std::isfinite(score) || score < -1.0 || score > 1.0) {
    throw ValidationError("score must lie in [-1, 1]");
  }

  AnnotationEvent e;
  e.annotator_id = annotator;
  e.text_id = task.text_id;
  e.start = task.start;
  e.end = task.end;
  e.kind = task.kind;
  e.dimension = dim;
  e.score = score;
  e.timestamp = clock_();
  e.validate();

  const std::string line = event_to_json(e).dump() + "\n";
  append_line(line);

  auto next = std::make_shared<Snapshot>(*snap);
  auto units = std::make_shared<std::set<UnitKey>>();
  if (auto it = snap->done.find(annotator); it != snap->done.end()) *units = *it->second;
  units->insert(e.unit());
  next->done[annotator] = std::move(units);
  next->log_bytes += line.size();
  publish(std::move(next));
  return e;
}

std::vector<AnnotationEvent> AnnotationService::export_events() const {
  const auto snap = snapshot();
  auto events = collapse_latest(parse_log(read_prefix(log_path_, snap->log_bytes), log_path_.string()));
  std::stable_sort(events.begin(), events.end(), [](const AnnotationEvent& a, const AnnotationEvent& b) {
    return std::tie(a.text_id, a.start, a.end, a.kind, a.dimension, a.annotator_id) <
           std::tie(b.text_id, b.start, b.end, b.kind, b.dimension, b.annotator_id);
  });
  return events;
}

std::string AnnotationService::export_jsonl() const {
  std::ostringstream out;
  write_annotations(export_events(), out);
  return out.str();
}

Progress AnnotationService::progress() const {
  const auto snap = snapshot();
  Progress p;
  if (!snap->loaded) return p;
  const auto& tasks = snap->loaded->tasks;
  p.tasks = tasks.size();
  for (const auto& [annotator, units] : snap->done) {
    SessionState s;
    s.annotator_id = annotator;
    s.position = tasks.size();
    std::array<std::size_t, 3> counts{};
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const bool complete = task_complete(tasks[i], units.get());
      if (complete) ++s.completed;
      if (!complete && s.position == tasks.size()) s.position = i;
      for (Dimension d : tasks[i].dimensions) {
        if (units->count(unit_of(tasks[i], d))) ++counts[static_cast<std::size_t>(d)];
      }
    }
    for (std::size_t d = 0; d < 3; ++d) p.per_dimension[d] += counts[d];
    p.scored_units[annotator] = counts;
    p.sessions[annotator] = std::move(s);
  }
  return p;
}

std::vector<SessionState> AnnotationService::sessions() const {
  std::vector<SessionState> out;
  for (auto& [id, s] : progress().sessions) out.push_back(s);
  return out;
}

}  // namespace dsr::service
