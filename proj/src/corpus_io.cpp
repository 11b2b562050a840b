#include "derivcheck/corpus_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "derivcheck/eqparse.hpp"
#include "derivcheck/errors.hpp"
#include "derivcheck/utf8.hpp"

namespace derivcheck {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& require(const json& record, const char* field, std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) throw CorpusError("missing", line, field);
  return *it;
}

std::string require_string(const json& record, const char* field, std::size_t line) {
  const json& v = require(record, field, line);
  if (!v.is_string()) throw CorpusError("expected a string", line, field);
  return v.get<std::string>();
}

std::size_t require_offset(const json& record, const char* field, std::size_t line) {
  const json& v = require(record, field, line);
  if (!v.is_number_unsigned()) throw CorpusError("expected a non-negative integer", line, field);
  return v.get<std::size_t>();
}

std::vector<std::string> string_list(const json& v, std::size_t line, const std::string& field) {
  if (!v.is_array()) throw CorpusError("expected an array", line, field);
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) throw CorpusError("expected strings", line, field);
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<Rational> rational_list(const json& v, std::size_t line, const std::string& field) {
  if (!v.is_array()) throw CorpusError("expected an array", line, field);
  std::vector<Rational> out;
  for (const auto& item : v) out.push_back(rational_from_json(item, line, field));
  return out;
}

bool has_decimal(const json& v) {
  for (const auto& item : v) {
    if (item.is_string() && item.get<std::string>().find('.') != std::string::npos) return true;
  }
  return false;
}

Template equations_from_json(const json& v, std::size_t line, const std::string& field) {
  auto lines = string_list(v, line, field);
  if (lines.empty()) throw CorpusError("empty equation system", line, field);
  try {
    return parse_template(lines);
  } catch (const Error& e) {
    throw CorpusError(e.what(), line, field);
  }
}

char slot_from_json(const json& v, std::size_t line) {
  if (!v.is_string()) throw CorpusError("expected a slot name", line, "alignment");
  auto s = v.get<std::string>();
  if (s.size() != 1 || s[0] < 'A' || s[0] > 'Z') throw CorpusError("bad slot name '" + s + "'", line, "alignment");
  return s[0];
}

Alignment alignment_from_json(const json& v, const Template& tmpl, std::size_t line) {
  if (!v.is_array()) throw CorpusError("expected an array", line, "alignment");
  Alignment a;
  for (const auto& tuple : v) {
    if (!tuple.is_object()) throw CorpusError("expected {q, slot} objects", line, "alignment");
    std::string q = require_string(tuple, "q", line);
    auto slot_it = tuple.find("slot");
    if (slot_it == tuple.end() || slot_it->is_null() || (slot_it->is_string() && slot_it->get<std::string>().empty())) {
      a.irrelevant.push_back(q);
      continue;
    }
    char slot = slot_from_json(*slot_it, line);
    if (!tmpl.has_slot(slot)) throw CorpusError(std::string("unknown slot ") + slot, line, "alignment");
    if (!a.slot_to_number.emplace(slot, q).second) {
      throw CorpusError(std::string("slot ") + slot + " aligned twice", line, "alignment");
    }
  }
  for (char slot : tmpl.slots) {
    if (!a.slot_to_number.contains(slot)) throw CorpusError(std::string("slot ") + slot + " unaligned", line, "alignment");
  }
  return a;
}

void check_slot_sharing(const Alignment& a, const LoadOptions& options, std::size_t line) {
  if (options.allow_slot_sharing) return;
  std::set<std::string> seen;
  for (const auto& [slot, q] : a.slot_to_number) {
    if (!seen.insert(q).second) throw CorpusError("number '" + q + "' aligned to two slots", line, "alignment");
  }
}

std::vector<std::string> lines_of(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

json parse_line(const std::string& text, std::size_t line) {
  try {
    json record = json::parse(text);
    if (!record.is_object()) throw CorpusError("record is not an object", line);
    return record;
  } catch (const json::parse_error& e) {
    throw CorpusError(std::string("malformed record: ") + e.what(), line);
  }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

Rational rational_from_json(const json& value, std::size_t line, const std::string& field) {
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw CorpusError(e.what(), line, field);
    }
  }
  if (value.is_number_integer()) {
    return value.is_number_unsigned() ? Rational(value.get<std::uint64_t>()) : Rational(value.get<std::int64_t>());
  }
  throw CorpusError("expected a rational string", line, field);
}

ordered_json alignment_to_json(const Alignment& alignment) {
  ordered_json out = ordered_json::array();
  for (const auto& [slot, q] : alignment.slot_to_number) {
    out.push_back(ordered_json{{"q", q}, {"slot", std::string(1, slot)}});
  }
  return out;
}

void validate_problem(const WordProblem& p, const LoadOptions& options, std::size_t line) {
  if (p.id.empty()) throw CorpusError("empty", line, "id");
  const std::size_t length = utf8::length(p.text);
  std::set<std::string> ids;
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < p.numbers.size(); ++i) {
    const auto& n = p.numbers[i];
    if (!ids.insert(n.id).second) throw CorpusError("duplicate number id '" + n.id + "'", line, "numbers");
    if (n.span_start >= n.span_end || n.span_end > length) {
      throw CorpusError("span out of range for '" + n.id + "'", line, "numbers");
    }
    if (i > 0 && n.span_start < p.numbers[i - 1].span_start) throw CorpusError("numbers not sorted", line, "numbers");
    if (i > 0 && n.span_start < prev_end) throw CorpusError("overlapping spans", line, "numbers");
    if (utf8::substr(p.text, n.span_start, n.span_end) != n.surface) {
      throw CorpusError("surface does not match text for '" + n.id + "'", line, "numbers");
    }
    prev_end = n.span_end;
  }
  if (!p.gold_equations.grounded()) throw CorpusError("gold equations contain slots", line, "equations");
  if (p.annotation) {
    const auto& d = p.annotation->derivation;
    for (const auto& [slot, q] : d.alignment.slot_to_number) {
      if (!ids.contains(q)) throw CorpusError("unknown number '" + q + "'", line, "alignment");
    }
    for (const auto& q : d.alignment.irrelevant) {
      if (!ids.contains(q)) throw CorpusError("unknown number '" + q + "'", line, "alignment");
    }
    check_slot_sharing(d.alignment, options, line);
    for (const auto& [a, b] : p.annotation->equiv_tnum) {
      const auto* na = p.find_number(a);
      const auto* nb = p.find_number(b);
      if (!na || !nb) throw CorpusError("unknown number in pair", line, "equiv_tnum");
      if (a == b) throw CorpusError("pair joins a number to itself", line, "equiv_tnum");
      if (na->value != nb->value) throw CorpusError("pair joins numbers of different value", line, "equiv_tnum");
    }
  }
}

WordProblem problem_from_json(const json& record, std::size_t line, const LoadOptions& options) {
  WordProblem p;
  p.id = require_string(record, "id", line);
  p.text = require_string(record, "text", line);

  const json& numbers = require(record, "numbers", line);
  if (!numbers.is_array()) throw CorpusError("expected an array", line, "numbers");
  for (const auto& n : numbers) {
    if (!n.is_object()) throw CorpusError("expected objects", line, "numbers");
    TextualNumber tn;
    tn.id = require_string(n, "id", line);
    tn.value = rational_from_json(require(n, "value", line), line, "numbers");
    tn.span_start = require_offset(n, "start", line);
    tn.span_end = require_offset(n, "end", line);
    tn.surface = require_string(n, "surface", line);
    p.numbers.push_back(std::move(tn));
  }

  p.gold_equations = equations_from_json(require(record, "equations", line), line, "equations");
  p.gold_solution = rational_list(require(record, "solution", line), line, "solution");

  auto tmpl_it = record.find("template");
  auto align_it = record.find("alignment");
  if (tmpl_it != record.end() && !tmpl_it->is_null()) {
    if (align_it == record.end()) throw CorpusError("template without alignment", line, "alignment");
    DerivationAnnotation ann;
    ann.derivation.tmpl = equations_from_json(*tmpl_it, line, "template");
    ann.derivation.alignment = alignment_from_json(*align_it, ann.derivation.tmpl, line);
    materialize_irrelevant(ann.derivation.alignment, p.numbers);
    if (auto eq_it = record.find("equiv_tnum"); eq_it != record.end()) {
      if (!eq_it->is_array()) throw CorpusError("expected an array", line, "equiv_tnum");
      for (const auto& pair : *eq_it) {
        auto ids = string_list(pair, line, "equiv_tnum");
        if (ids.size() != 2) throw CorpusError("expected [q, q'] pairs", line, "equiv_tnum");
        ann.equiv_tnum.emplace_back(ids[0], ids[1]);
      }
    }
    p.annotation = std::move(ann);
  } else if (align_it != record.end()) {
    throw CorpusError("alignment without template", line, "template");
  }

  validate_problem(p, options, line);
  return p;
}

ordered_json problem_to_json(const WordProblem& p) {
  ordered_json out;
  out["id"] = p.id;
  out["text"] = p.text;
  ordered_json numbers = ordered_json::array();
  for (const auto& n : p.numbers) {
    numbers.push_back(ordered_json{{"id", n.id},
                                   {"value", format_rational(n.value)},
                                   {"start", n.span_start},
                                   {"end", n.span_end},
                                   {"surface", n.surface}});
  }
  out["numbers"] = std::move(numbers);
  out["equations"] = render_template(p.gold_equations);
  ordered_json solution = ordered_json::array();
  for (const auto& v : p.gold_solution) solution.push_back(format_rational(v));
  out["solution"] = std::move(solution);
  if (p.annotation) {
    out["template"] = render_template(p.annotation->derivation.tmpl);
    out["alignment"] = alignment_to_json(p.annotation->derivation.alignment);
    ordered_json pairs = ordered_json::array();
    for (const auto& [a, b] : p.annotation->equiv_tnum) pairs.push_back(ordered_json::array({a, b}));
    out["equiv_tnum"] = std::move(pairs);
  }
  return out;
}

std::vector<WordProblem> read_corpus(std::istream& in, const LoadOptions& options) {
  std::vector<WordProblem> out;
  std::set<std::string> seen;
  auto lines = lines_of(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    WordProblem p = problem_from_json(parse_line(lines[i], i + 1), i + 1, options);
    if (!seen.insert(p.id).second) throw CorpusError("duplicate problem id '" + p.id + "'", i + 1, "id");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<WordProblem> load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_corpus(in, options);
}

void write_corpus(const std::vector<WordProblem>& problems, std::ostream& out) {
  for (const auto& p : problems) out << problem_to_json(p).dump() << '\n';
}

void save_corpus(const std::vector<WordProblem>& problems, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_corpus(problems, out);
  if (!out) throw Error("write failed for " + path.string());
}

Prediction prediction_from_json(const json& record, std::size_t line, const LoadOptions& options) {
  Prediction p;
  p.problem_id = require_string(record, "problem_id", line);
  p.derivation.tmpl = equations_from_json(require(record, "template", line), line, "template");
  p.derivation.alignment = alignment_from_json(require(record, "alignment", line), p.derivation.tmpl, line);
  check_slot_sharing(p.derivation.alignment, options, line);
  if (auto it = record.find("solution"); it != record.end() && !it->is_null()) {
    p.solution = rational_list(*it, line, "solution");
    p.decimal_solution = has_decimal(*it);
  }
  return p;
}

ordered_json prediction_to_json(const Prediction& p) {
  ordered_json out;
  out["problem_id"] = p.problem_id;
  out["template"] = render_template(p.derivation.tmpl);
  out["alignment"] = alignment_to_json(p.derivation.alignment);
  if (p.solution) {
    ordered_json solution = ordered_json::array();
    for (const auto& v : *p.solution) solution.push_back(format_rational(v));
    out["solution"] = std::move(solution);
  }
  return out;
}

std::vector<Prediction> read_predictions(std::istream& in, const LoadOptions& options) {
  std::vector<Prediction> out;
  auto lines = lines_of(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    out.push_back(prediction_from_json(parse_line(lines[i], i + 1), i + 1, options));
  }
  return out;
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_predictions(in, options);
}

void save_predictions(const std::vector<Prediction>& predictions, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (const auto& p : predictions) out << prediction_to_json(p).dump() << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace derivcheck
