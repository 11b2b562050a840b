#include "derivcheck/task_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "derivcheck/corpus_io.hpp"
#include "derivcheck/errors.hpp"

namespace derivcheck {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::size_t parse_index(std::string_view digits, std::string_view whole) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || end != digits.data() + digits.size() || value == 0) {
    throw DecisionError("malformed literal position '" + std::string(whole) + "'");
  }
  return value - 1;
}

std::string string_field(const json& v, const std::string& field) {
  if (!v.is_string()) throw DecisionError("field '" + field + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> id_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw DecisionError("field '" + field + "' must be a list");
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(string_field(x, field));
  return out;
}

}  // namespace

LiteralRef parse_literal(std::string_view text) {
  auto hash = text.find('#');
  if (text.size() < 4 || text.front() != 'e' || hash == std::string_view::npos) {
    throw DecisionError("malformed literal position '" + std::string(text) + "'");
  }
  return LiteralRef{parse_index(text.substr(1, hash - 1), text), parse_index(text.substr(hash + 1), text)};
}

const char* task_status_name(TaskStatus status) { return status == TaskStatus::kDone ? "done" : "pending"; }

ordered_json decision_to_json(const HumanDecision& d) {
  ordered_json out;
  out["task_id"] = d.task_id;
  out["alignment"] = ordered_json::array();
  for (const auto& [slot, q] : d.alignment) out["alignment"].push_back({{"slot", std::string(1, slot)}, {"q", q}});
  out["equiv_tnum"] = ordered_json::array();
  for (const auto& [a, b] : d.equiv_tnum) out["equiv_tnum"].push_back({a, b});
  if (!d.decompositions.empty()) {
    out["decompositions"] = ordered_json::array();
    for (const auto& dec : d.decompositions) {
      out["decompositions"].push_back(
          {{"literal", format_literal(dec.literal)}, {"op", std::string(1, dec.op)}, {"numbers", dec.numbers}});
    }
  }
  if (!d.constants.empty()) {
    out["constants"] = ordered_json::array();
    for (const auto& ref : d.constants) out["constants"].push_back(format_literal(ref));
  }
  return out;
}

HumanDecision decision_from_json(const json& record) {
  if (!record.is_object()) throw DecisionError("decision must be an object");
  HumanDecision d;
  if (record.contains("task_id")) d.task_id = string_field(record["task_id"], "task_id");
  if (!record.contains("alignment") || !record["alignment"].is_array()) {
    throw DecisionError("field 'alignment' must be a list");
  }
  for (const auto& tuple : record["alignment"]) {
    if (!tuple.is_object() || !tuple.contains("slot") || !tuple.contains("q")) {
      throw DecisionError("alignment entries need 'slot' and 'q'");
    }
    const std::string slot = string_field(tuple["slot"], "slot");
    if (slot.size() != 1 || slot[0] < 'A' || slot[0] > 'Z') throw DecisionError("invalid slot '" + slot + "'");
    if (!d.alignment.emplace(slot[0], string_field(tuple["q"], "q")).second) {
      throw DecisionError("slot " + slot + " assigned twice");
    }
  }
  if (record.contains("equiv_tnum")) {
    if (!record["equiv_tnum"].is_array()) throw DecisionError("field 'equiv_tnum' must be a list");
    for (const auto& pair : record["equiv_tnum"]) {
      auto ids = id_list(pair, "equiv_tnum");
      if (ids.size() != 2) throw DecisionError("equiv_tnum entries are pairs");
      d.equiv_tnum.emplace_back(ids[0], ids[1]);
    }
  }
  if (record.contains("decompositions")) {
    if (!record["decompositions"].is_array()) throw DecisionError("field 'decompositions' must be a list");
    for (const auto& entry : record["decompositions"]) {
      if (!entry.is_object() || !entry.contains("literal") || !entry.contains("numbers")) {
        throw DecisionError("decompositions need 'literal' and 'numbers'");
      }
      Decomposition dec;
      dec.literal = parse_literal(string_field(entry["literal"], "literal"));
      const std::string op = entry.contains("op") ? string_field(entry["op"], "op") : "+";
      if (op != "+" && op != "*") throw DecisionError("decomposition op must be '+' or '*'");
      dec.op = op[0];
      dec.numbers = id_list(entry["numbers"], "numbers");
      d.decompositions.push_back(std::move(dec));
    }
  }
  if (record.contains("constants")) {
    for (const auto& s : id_list(record["constants"], "constants")) d.constants.push_back(parse_literal(s));
  }
  return d;
}

ordered_json task_to_json(const AnnotationTask& task) {
  ordered_json out;
  out["id"] = task.id;
  out["status"] = task_status_name(task.status);
  out["problem"] = problem_to_json(task.problem);
  out["slots"] = ordered_json::array();
  for (const auto& s : task.slots) {
    out["slots"].push_back({{"slot", std::string(1, s.slot)},
                            {"literal", format_literal(s.literal)},
                            {"value", format_rational(s.value)},
                            {"candidates", s.candidates}});
  }
  out["open_literals"] = ordered_json::array();
  for (const auto& o : task.open_literals) {
    out["open_literals"].push_back({{"literal", format_literal(o.literal)}, {"value", format_rational(o.value)}});
  }
  if (task.decision) out["decision"] = decision_to_json(*task.decision);
  return out;
}

AnnotationTask task_from_json(const json& record, std::size_t line) {
  if (!record.is_object()) throw CorpusError("task must be an object", line);
  auto need = [&](const char* field) -> const json& {
    if (!record.contains(field)) throw CorpusError("missing", line, field);
    return record[field];
  };
  try {
    AnnotationTask task;
    task.id = need("id").get<std::string>();
    const std::string status = record.value("status", "pending");
    if (status != "pending" && status != "done") throw CorpusError("unknown status '" + status + "'", line, "status");
    task.status = status == "done" ? TaskStatus::kDone : TaskStatus::kPending;
    task.problem = problem_from_json(need("problem"), line);
    if (task.problem.id != task.id) throw CorpusError("task id differs from problem id", line, "id");
    for (const auto& s : need("slots")) {
      SlotSkeleton sk;
      const auto name = s.at("slot").get<std::string>();
      if (name.size() != 1) throw CorpusError("invalid slot '" + name + "'", line, "slots");
      sk.slot = name[0];
      sk.literal = parse_literal(s.at("literal").get<std::string>());
      sk.value = rational_from_json(s.at("value"), line, "slots");
      sk.candidates = s.at("candidates").get<std::vector<std::string>>();
      for (const auto& q : sk.candidates) {
        const auto* n = task.problem.find_number(q);
        if (!n) throw CorpusError("unknown candidate '" + q + "'", line, "slots");
        if (n->value != sk.value) throw CorpusError("candidate " + q + " does not carry the slot value", line, "slots");
      }
      task.slots.push_back(std::move(sk));
    }
    if (record.contains("open_literals")) {
      for (const auto& o : record["open_literals"]) {
        task.open_literals.push_back(OpenLiteral{parse_literal(o.at("literal").get<std::string>()),
                                                 rational_from_json(o.at("value"), line, "open_literals")});
      }
    }
    if (record.contains("decision") && !record["decision"].is_null()) {
      task.decision = decision_from_json(record["decision"]);
    }
    return task;
  } catch (const DecisionError& e) {
    throw CorpusError(e.what(), line);
  } catch (const json::exception& e) {
    throw CorpusError(e.what(), line);
  }
}

std::vector<AnnotationTask> read_tasks(std::istream& in) {
  std::vector<AnnotationTask> tasks;
  std::set<std::string> ids;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw CorpusError(std::string("malformed JSON: ") + e.what(), line);
    }
    tasks.push_back(task_from_json(record, line));
    if (!ids.insert(tasks.back().id).second) throw CorpusError("duplicate task '" + tasks.back().id + "'", line, "id");
  }
  return tasks;
}

std::vector<AnnotationTask> load_tasks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_tasks(in);
}

void write_tasks(const std::vector<AnnotationTask>& tasks, std::ostream& out) {
  for (const auto& t : tasks) out << task_to_json(t).dump() << '\n';
}

void save_tasks(const std::vector<AnnotationTask>& tasks, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  write_tasks(tasks, out);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace derivcheck
