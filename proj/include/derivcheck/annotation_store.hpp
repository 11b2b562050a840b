#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "derivcheck/annotate.hpp"
#include "derivcheck/errors.hpp"

namespace derivcheck {

class UnknownTask : public Error {
 public:
  using Error::Error;
};

struct Progress {
  std::size_t total = 0;
  std::size_t done = 0;
};

// Tasks plus their human decisions. Accepted decisions are appended to a line
// log and fsync'ed before submit() returns; every `snapshot_every` decisions
// the latest decision per task is written to "<log>.snapshot" and the log is
// truncated. Construction replays snapshot then log, last writer wins.
// Readers share a lock; submissions are serialized.
class AnnotationStore {
 public:
  struct Options {
    std::size_t snapshot_every = 64;
  };

  AnnotationStore(std::vector<AnnotationTask> tasks, std::filesystem::path log_path, Options options);
  AnnotationStore(std::vector<AnnotationTask> tasks, std::filesystem::path log_path)
      : AnnotationStore(std::move(tasks), std::move(log_path), Options{}) {}
  ~AnnotationStore();

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  std::vector<AnnotationTask> pending() const;
  std::vector<AnnotationTask> tasks() const;
  std::optional<AnnotationTask> task(const std::string& id) const;
  Progress progress() const;
  // Problems of done tasks, annotated.
  std::vector<WordProblem> annotated() const;

  // Validates, persists, then applies. Nothing is written when validation
  // fails. Throws UnknownTask, DecisionError, Error (I/O).
  WordProblem submit(const std::string& task_id, HumanDecision decision);

  // Logged decisions that no longer apply to the loaded tasks.
  const std::vector<std::string>& replay_warnings() const { return replay_warnings_; }

  const std::filesystem::path& log_path() const { return log_path_; }
  std::filesystem::path snapshot_path() const;

 private:
  void replay();
  void replay_file(const std::filesystem::path& path, bool truncate_torn_tail);
  bool apply(const HumanDecision& decision, std::string* error);
  void append(const std::string& line);
  void write_snapshot();

  mutable std::shared_mutex mutex_;
  std::vector<AnnotationTask> tasks_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, WordProblem> annotated_;
  std::filesystem::path log_path_;
  Options options_;
  int log_fd_ = -1;
  std::size_t since_snapshot_ = 0;
  std::vector<std::string> replay_warnings_;
};

}  // namespace derivcheck
