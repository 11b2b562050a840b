#pragma once

// Annotation task and decision records, one JSON object per line.
//
//   task:     {id, status, problem:{..corpus record..}, slots:[{slot, literal, value,
//              candidates:[q..]}], open_literals:[{literal, value}], decision?}
//   decision: {task_id, alignment:[{slot,q}], equiv_tnum:[[q,q']],
//              decompositions?:[{literal, op, numbers:[q..]}], constants?:[literal..]}
//
// Literal positions are written "e<equation>#<index>", both 1-based.

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "derivcheck/annotate.hpp"

namespace derivcheck {

// Throws DecisionError.
LiteralRef parse_literal(std::string_view text);

nlohmann::ordered_json decision_to_json(const HumanDecision& decision);
// Throws DecisionError naming the offending field.
HumanDecision decision_from_json(const nlohmann::json& record);

nlohmann::ordered_json task_to_json(const AnnotationTask& task);
// Throws CorpusError.
AnnotationTask task_from_json(const nlohmann::json& record, std::size_t line);

std::vector<AnnotationTask> read_tasks(std::istream& in);
std::vector<AnnotationTask> load_tasks(const std::filesystem::path& path);
void write_tasks(const std::vector<AnnotationTask>& tasks, std::ostream& out);
void save_tasks(const std::vector<AnnotationTask>& tasks, const std::filesystem::path& path);

const char* task_status_name(TaskStatus status);

}  // namespace derivcheck
