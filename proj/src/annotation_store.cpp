#include "derivcheck/annotation_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "derivcheck/task_io.hpp"

namespace derivcheck {

namespace {

[[noreturn]] void io_failure(const std::string& what, const std::filesystem::path& path) {
  throw Error(what + " " + path.string() + ": " + std::strerror(errno));
}

void write_all(int fd, const std::string& data, const std::filesystem::path& path) {
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_failure("cannot write", path);
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

void sync_directory(const std::filesystem::path& file) {
  auto dir = file.parent_path();
  if (dir.empty()) dir = ".";
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

AnnotationStore::AnnotationStore(std::vector<AnnotationTask> tasks, std::filesystem::path log_path, Options options)
    : tasks_(std::move(tasks)), log_path_(std::move(log_path)), options_(options) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (!index_.emplace(tasks_[i].id, i).second) throw Error("duplicate task '" + tasks_[i].id + "'");
    // Status in the tasks file is advisory; the decision log is authoritative.
    tasks_[i].decision.reset();
    tasks_[i].status = TaskStatus::kPending;
  }
  replay();
  log_fd_ = ::open(log_path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (log_fd_ < 0) io_failure("cannot open", log_path_);
  sync_directory(log_path_);
}

AnnotationStore::~AnnotationStore() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

std::filesystem::path AnnotationStore::snapshot_path() const {
  auto p = log_path_;
  p += ".snapshot";
  return p;
}

void AnnotationStore::replay() {
  replay_file(snapshot_path(), false);
  replay_file(log_path_, true);
}

void AnnotationStore::replay_file(const std::filesystem::path& path, bool truncate_torn_tail) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string data = buffer.str();
  in.close();

  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos < data.size()) {
    const std::size_t end = data.find('\n', pos);
    ++line;
    if (end == std::string::npos) {
      // Unterminated tail: a write cut short, never acknowledged.
      if (!truncate_torn_tail) throw Error(path.string() + ": truncated final record");
      std::filesystem::resize_file(path, pos);
      replay_warnings_.push_back(path.string() + ": dropped unterminated record at line " + std::to_string(line));
      break;
    }
    const std::string text = data.substr(pos, end - pos);
    pos = end + 1;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    HumanDecision decision;
    try {
      decision = decision_from_json(nlohmann::json::parse(text));
    } catch (const std::exception& e) {
      throw Error(path.string() + ": line " + std::to_string(line) + ": " + e.what());
    }
    std::string error;
    if (!apply(decision, &error)) {
      replay_warnings_.push_back(path.string() + ": line " + std::to_string(line) + ": " + error);
    }
  }
}

bool AnnotationStore::apply(const HumanDecision& decision, std::string* error) {
  auto it = index_.find(decision.task_id);
  if (it == index_.end()) {
    *error = "unknown task '" + decision.task_id + "'";
    return false;
  }
  AnnotationTask& task = tasks_[it->second];
  AnnotationTask candidate = task;
  candidate.decision = decision;
  try {
    WordProblem annotated = apply_human_decision(candidate, task.problem);
    task.decision = decision;
    task.status = TaskStatus::kDone;
    annotated_.insert_or_assign(task.id, std::move(annotated));
    return true;
  } catch (const DecisionError& e) {
    *error = e.what();
    return false;
  }
}

std::vector<AnnotationTask> AnnotationStore::pending() const {
  std::shared_lock lock(mutex_);
  std::vector<AnnotationTask> out;
  for (const auto& t : tasks_) {
    if (t.status == TaskStatus::kPending) out.push_back(t);
  }
  return out;
}

std::vector<AnnotationTask> AnnotationStore::tasks() const {
  std::shared_lock lock(mutex_);
  return tasks_;
}

std::optional<AnnotationTask> AnnotationStore::task(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return tasks_[it->second];
}

Progress AnnotationStore::progress() const {
  std::shared_lock lock(mutex_);
  return Progress{tasks_.size(), annotated_.size()};
}

std::vector<WordProblem> AnnotationStore::annotated() const {
  std::shared_lock lock(mutex_);
  std::vector<WordProblem> out;
  for (const auto& t : tasks_) {
    auto it = annotated_.find(t.id);
    if (it != annotated_.end()) out.push_back(it->second);
  }
  return out;
}

WordProblem AnnotationStore::submit(const std::string& task_id, HumanDecision decision) {
  std::unique_lock lock(mutex_);
  auto it = index_.find(task_id);
  if (it == index_.end()) throw UnknownTask("unknown task '" + task_id + "'");
  if (!decision.task_id.empty() && decision.task_id != task_id) {
    throw DecisionError("decision names task '" + decision.task_id + "'");
  }
  decision.task_id = task_id;
  AnnotationTask& task = tasks_[it->second];
  AnnotationTask candidate = task;
  candidate.decision = decision;
  WordProblem annotated = apply_human_decision(candidate, task.problem);

  append(decision_to_json(decision).dump() + "\n");
  task.decision = std::move(decision);
  task.status = TaskStatus::kDone;
  annotated_.insert_or_assign(task_id, annotated);
  if (options_.snapshot_every > 0 && ++since_snapshot_ >= options_.snapshot_every) write_snapshot();
  return annotated;
}

void AnnotationStore::append(const std::string& line) {
  write_all(log_fd_, line, log_path_);
  if (::fsync(log_fd_) != 0) io_failure("cannot sync", log_path_);
}

void AnnotationStore::write_snapshot() {
  std::string body;
  for (const auto& t : tasks_) {
    if (t.decision && t.status == TaskStatus::kDone) body += decision_to_json(*t.decision).dump() + "\n";
  }
  auto tmp = snapshot_path();
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_failure("cannot open", tmp);
  write_all(fd, body, tmp);
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_failure("cannot sync", tmp);
  }
  ::close(fd);
  std::filesystem::rename(tmp, snapshot_path());
  sync_directory(log_path_);
  // A crash before this point replays the old log over the new snapshot,
  // which yields the same state.
  if (::ftruncate(log_fd_, 0) != 0 || ::fsync(log_fd_) != 0) io_failure("cannot truncate", log_path_);
  since_snapshot_ = 0;
}

}  // namespace derivcheck
