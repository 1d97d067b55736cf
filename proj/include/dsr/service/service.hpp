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

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dsr/agreement/events.hpp"
#include "dsr/core/jsonl.hpp"
#include "dsr/core/types.hpp"
#include "dsr/util/error.hpp"
#include "dsr/util/time.hpp"

namespace dsr::service {

// Unknown corpus, task or annotator (HTTP 404).
class NotFound : public Error {
 public:
  using Error::Error;
};

// Request conflicts with live state (HTTP 409).
class Conflict : public Error {
 public:
  using Error::Error;
};

// One span to score, in the order annotators see them.
struct AnnotationTask {
  std::string task_id;
  std::string text_id;
  std::string content;
  std::size_t start = 0;
  std::size_t end = 0;
  SpanKind kind = SpanKind::Character;
  std::string surface;
  std::vector<Dimension> dimensions;  // OA only for Topic spans
  std::array<bool, 3> scored{};       // per dimension, for the asking annotator
};

struct SessionState {
  std::string annotator_id;
  std::size_t position = 0;   // index of the next pending task; == task count when done
  std::size_t completed = 0;  // tasks with every dimension scored
  friend bool operator==(const SessionState&, const SessionState&) = default;
};

struct Progress {
  std::size_t tasks = 0;
  std::map<std::string, SessionState> sessions;
  std::map<std::string, std::array<std::size_t, 3>> scored_units;  // per annotator, per dimension
  std::array<std::size_t, 3> per_dimension{};                      // over all annotators
};

jsonl::OrderedJson task_to_json(const AnnotationTask& task);
jsonl::OrderedJson progress_to_json(const Progress& progress);

// Annotation backend over an append-only JSONL log. Submissions are
// serialized through one writer and fsynced before they are acknowledged;
// reads run against immutable snapshots without taking the writer lock.
class AnnotationService {
 public:
  using Clock = std::function<util::Timestamp()>;

  // Replays `log_path` if it exists. A trailing partial line (an append that
  // never completed, so was never acknowledged) is truncated away.
  explicit AnnotationService(std::filesystem::path log_path, Clock clock = &util::now_utc);
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // Installs a corpus. Throws Conflict while any annotator has scored part
  // of the current corpus without finishing it.
  void load_corpus(Corpus corpus);

  // Name and size of the loaded corpus, if any.
  jsonl::OrderedJson corpora() const;

  // First task (text order, then start, then kind) with an unscored
  // dimension for this annotator, or nullopt when all are done. Pure read:
  // asking again before submitting returns the same task.
  std::optional<AnnotationTask> next_task(const std::string& annotator) const;

  // Validates, appends durably, then returns the stored event. A repeat
  // submission for the same unit is appended too; the latest wins.
  AnnotationEvent submit_score(const std::string& annotator, const std::string& task_id,
                               const std::string& dimension, double score);

  // Log replay, collapsed latest-wins, sorted by unit then annotator.
  std::vector<AnnotationEvent> export_events() const;
  std::string export_jsonl() const;

  Progress progress() const;
  std::vector<SessionState> sessions() const;

  const std::filesystem::path& log_path() const noexcept { return log_path_; }

 private:
  struct Loaded;
  struct Snapshot;

  std::shared_ptr<const Snapshot> snapshot() const;
  void publish(std::shared_ptr<const Snapshot> next);
  void append_line(const std::string& line);

  std::filesystem::path log_path_;
  Clock clock_;
  int fd_ = -1;
  std::mutex writer_;
  std::shared_ptr<const Snapshot> current_;
};

}  // namespace dsr::service
