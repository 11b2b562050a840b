#include "derivcheck/annotate.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "derivcheck/errors.hpp"
#include "derivcheck/metrics.hpp"
#include "derivcheck/utf8.hpp"

namespace derivcheck {

// ---------------------------------------------------------------------------
// Extraction

namespace {

enum class WordClass { kNone, kUnit, kTeen, kTens, kHundred, kThousand };

struct WordValue {
  WordClass cls;
  int value;
};

std::optional<WordValue> lookup_word(std::string_view w) {
  static const std::map<std::string_view, WordValue> kLexicon = {
      {"one", {WordClass::kUnit, 1}},        {"two", {WordClass::kUnit, 2}},
      {"three", {WordClass::kUnit, 3}},      {"four", {WordClass::kUnit, 4}},
      {"five", {WordClass::kUnit, 5}},       {"six", {WordClass::kUnit, 6}},
      {"seven", {WordClass::kUnit, 7}},      {"eight", {WordClass::kUnit, 8}},
      {"nine", {WordClass::kUnit, 9}},       {"ten", {WordClass::kTeen, 10}},
      {"eleven", {WordClass::kTeen, 11}},    {"twelve", {WordClass::kTeen, 12}},
      {"thirteen", {WordClass::kTeen, 13}},  {"fourteen", {WordClass::kTeen, 14}},
      {"fifteen", {WordClass::kTeen, 15}},   {"sixteen", {WordClass::kTeen, 16}},
      {"seventeen", {WordClass::kTeen, 17}}, {"eighteen", {WordClass::kTeen, 18}},
      {"nineteen", {WordClass::kTeen, 19}},  {"twenty", {WordClass::kTens, 20}},
      {"thirty", {WordClass::kTens, 30}},    {"forty", {WordClass::kTens, 40}},
      {"fifty", {WordClass::kTens, 50}},     {"sixty", {WordClass::kTens, 60}},
      {"seventy", {WordClass::kTens, 70}},   {"eighty", {WordClass::kTens, 80}},
      {"ninety", {WordClass::kTens, 90}},    {"hundred", {WordClass::kHundred, 100}},
      {"thousand", {WordClass::kThousand, 1000}},
  };
  auto it = kLexicon.find(w);
  if (it == kLexicon.end()) return std::nullopt;
  return it->second;
}

struct Word {
  std::size_t begin;
  std::size_t end;
  std::string lower;
};

struct Found {
  std::size_t begin;  // bytes
  std::size_t end;
  Rational value;
};

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Only spaces or a single hyphen may join the words of one number.
bool joinable(std::string_view text, std::size_t from, std::size_t to) {
  if (from == to) return false;
  std::string_view gap = text.substr(from, to - from);
  if (gap == "-") return true;
  return std::all_of(gap.begin(), gap.end(), [](char c) { return c == ' '; });
}

std::vector<Found> scan_words(std::string_view text, const std::vector<Word>& words) {
  std::vector<Found> out;
  std::size_t i = 0;
  while (i < words.size()) {
    const std::string& w = words[i].lower;
    if (w == "twice" || w == "thrice" || w == "half") {
      out.push_back({words[i].begin, words[i].end, w == "half" ? Rational(1, 2) : Rational(w == "twice" ? 2 : 3)});
      ++i;
      continue;
    }
    long total = 0;
    long current = 0;
    WordClass last = WordClass::kNone;
    std::size_t j = i;
    for (; j < words.size(); ++j) {
      if (j > i && !joinable(text, words[j - 1].end, words[j].begin)) break;
      auto wv = lookup_word(words[j].lower);
      if (!wv) break;
      bool ok = false;
      switch (wv->cls) {
        case WordClass::kUnit:
          ok = last == WordClass::kNone || last == WordClass::kTens || last == WordClass::kHundred ||
               last == WordClass::kThousand;
          if (ok) current += wv->value;
          break;
        case WordClass::kTeen:
        case WordClass::kTens:
          ok = last == WordClass::kNone || last == WordClass::kHundred || last == WordClass::kThousand;
          if (ok) current += wv->value;
          break;
        case WordClass::kHundred:
          ok = (last == WordClass::kUnit || last == WordClass::kTeen || last == WordClass::kTens) && current < 100;
          if (ok) current *= 100;
          break;
        case WordClass::kThousand:
          ok = last != WordClass::kNone && last != WordClass::kThousand && total == 0;
          if (ok) {
            total = current * 1000;
            current = 0;
          }
          break;
        case WordClass::kNone:
          break;
      }
      if (!ok) break;
      last = wv->cls;
    }
    if (j == i) {
      ++i;
      continue;
    }
    out.push_back({words[i].begin, words[j - 1].end, Rational(total + current)});
    i = j;
  }
  return out;
}

std::optional<Found> scan_digits(std::string_view text, std::size_t& pos) {
  const std::size_t begin = pos;
  std::size_t p = pos;
  while (p < text.size() && is_digit(text[p])) ++p;
  std::string digits(text.substr(begin, p - begin));
  // Thousands separators: 1-3 leading digits, then groups of exactly three.
  if (digits.size() <= 3) {
    std::size_t q = p;
    std::string grouped = digits;
    while (q + 3 < text.size() && text[q] == ',' && is_digit(text[q + 1]) && is_digit(text[q + 2]) &&
           is_digit(text[q + 3]) && (q + 4 >= text.size() || !is_digit(text[q + 4]))) {
      grouped += text.substr(q + 1, 3);
      q += 4;
    }
    if (q != p) {
      digits = grouped;
      p = q;
    }
  }
  std::string literal = digits;
  if (p + 1 < text.size() && text[p] == '.' && is_digit(text[p + 1])) {
    std::size_t q = p + 1;
    while (q < text.size() && is_digit(text[q])) ++q;
    literal += std::string(text.substr(p, q - p));
    p = q;
  } else if (p + 1 < text.size() && text[p] == '/' && is_digit(text[p + 1]) && literal == std::string(text.substr(begin, p - begin))) {
    std::size_t q = p + 1;
    while (q < text.size() && is_digit(text[q])) ++q;
    std::string_view den = text.substr(p + 1, q - p - 1);
    if (den.find_first_not_of('0') != std::string_view::npos) {
      literal += "/" + std::string(den);
      p = q;
    }
  }
  pos = p;
  return Found{begin, p, parse_rational(literal)};
}

}  // namespace

std::vector<TextualNumber> extract_textual_numbers(std::string_view text) {
  std::vector<Found> found;
  std::vector<Word> words;

  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (is_digit(c)) {
      const bool glued = pos > 0 && (is_alpha(text[pos - 1]) || text[pos - 1] == '.');
      std::size_t before = pos;
      auto f = scan_digits(text, pos);
      if (!glued && f) found.push_back(*f);
      if (pos == before) ++pos;
    } else if (is_alpha(c)) {
      std::size_t end = pos;
      while (end < text.size() && is_alpha(text[end])) ++end;
      // words glued to digits ("5m") are units, never number words
      if (!(pos > 0 && is_digit(text[pos - 1]))) {
        std::string lower(text.substr(pos, end - pos));
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        words.push_back({pos, end, std::move(lower)});
      } else {
        words.push_back({pos, end, std::string()});
      }
      pos = end;
    } else {
      ++pos;
    }
  }
  auto from_words = scan_words(text, words);
  found.insert(found.end(), from_words.begin(), from_words.end());
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.begin < b.begin; });

  std::vector<TextualNumber> out;
  out.reserve(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    const auto& f = found[i];
    TextualNumber n;
    n.id = "q" + std::to_string(i + 1);
    n.value = f.value;
    n.span_start = utf8::length(text.substr(0, f.begin));
    n.span_end = n.span_start + utf8::length(text.substr(f.begin, f.end - f.begin));
    n.surface = std::string(text.substr(f.begin, f.end - f.begin));
    out.push_back(std::move(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ambiguity and tasks

namespace {

std::vector<std::string> numbers_valued(const WordProblem& problem, const Rational& value) {
  std::vector<std::string> out;
  for (const auto& n : problem.numbers) {
    if (n.value == value) out.push_back(n.id);
  }
  return out;
}

}  // namespace

std::string format_literal(const LiteralRef& ref) {
  return "e" + std::to_string(ref.equation + 1) + "#" + std::to_string(ref.index + 1);
}

AmbiguityReport detect_ambiguity(const WordProblem& problem) {
  AmbiguityReport report;
  report.problem_id = problem.id;
  for (const auto& lit : literals_of(problem.gold_equations)) {
    auto it = std::find_if(report.conflicts.begin(), report.conflicts.end(),
                           [&](const LiteralConflict& c) { return c.value == lit.value; });
    if (it != report.conflicts.end()) {
      it->literals.push_back(lit.ref);
      continue;
    }
    auto ids = numbers_valued(problem, lit.value);
    if (ids.size() >= 2) report.conflicts.push_back(LiteralConflict{lit.value, std::move(ids), {lit.ref}});
  }
  report.ambiguous = !report.conflicts.empty();
  return report;
}

AnnotationTask make_task(const WordProblem& problem) {
  AnnotationTask task;
  task.id = problem.id;
  task.problem = problem;
  for (const auto& lit : literals_of(problem.gold_equations)) {
    auto ids = numbers_valued(problem, lit.value);
    if (ids.empty()) {
      task.open_literals.push_back(OpenLiteral{lit.ref, lit.value});
      continue;
    }
    if (task.slots.size() == 26) throw CapacityExceeded("more than 26 literals to align in " + problem.id);
    const char slot = static_cast<char>('A' + task.slots.size());
    task.slots.push_back(SlotSkeleton{slot, lit.ref, lit.value, std::move(ids)});
  }
  return task;
}

Derivation induce_template(const EquationSystem& equations, const LiteralAlignment& alignment,
                           const std::vector<TextualNumber>& numbers) {
  auto find = [&](const std::string& id) -> const TextualNumber& {
    auto it = std::find_if(numbers.begin(), numbers.end(), [&](const TextualNumber& n) { return n.id == id; });
    if (it == numbers.end()) throw Error("unknown number '" + id + "'");
    return *it;
  };
  const auto lits = literals_of(equations);
  std::map<LiteralRef, Rational> value_at;
  for (const auto& l : lits) value_at.emplace(l.ref, l.value);

  for (const auto& [ref, id] : alignment.numbers) {
    auto it = value_at.find(ref);
    if (it == value_at.end()) throw Error("no literal at " + format_literal(ref));
    if (find(id).value != it->second) {
      throw Error("position/value mismatch: " + id + " is not " + format_rational(it->second) + " at " +
                  format_literal(ref));
    }
  }
  for (const auto& [ref, dec] : alignment.decompositions) {
    auto it = value_at.find(ref);
    if (it == value_at.end()) throw Error("no literal at " + format_literal(ref));
    if (alignment.numbers.contains(ref)) throw Error("literal " + format_literal(ref) + " both aligned and decomposed");
    if (dec.numbers.empty()) throw Error("empty decomposition at " + format_literal(ref));
    if (dec.op != '+' && dec.op != '*') throw Error("decomposition operator must be '+' or '*'");
    Rational acc = find(dec.numbers.front()).value;
    for (std::size_t i = 1; i < dec.numbers.size(); ++i) {
      const Rational& v = find(dec.numbers[i]).value;
      acc = dec.op == '+' ? Rational(acc + v) : Rational(acc * v);
    }
    if (acc != it->second) {
      throw Error("position/value mismatch: decomposition at " + format_literal(ref) + " gives " + format_rational(acc) +
                  ", literal is " + format_rational(it->second));
    }
  }

  Alignment slot_alignment;
  std::map<LiteralRef, Expr> replacements;
  char next = 'A';
  auto fresh = [&](const std::string& id) {
    if (next > 'Z') throw CapacityExceeded("induced template needs more than 26 slots");
    slot_alignment.slot_to_number.emplace(next, id);
    return Expr::slot(next++);
  };
  for (const auto& l : lits) {
    if (auto it = alignment.numbers.find(l.ref); it != alignment.numbers.end()) {
      replacements.emplace(l.ref, fresh(it->second));
    } else if (auto d = alignment.decompositions.find(l.ref); d != alignment.decompositions.end()) {
      const auto kind = d->second.op == '+' ? Expr::Kind::kAdd : Expr::Kind::kMul;
      Expr chain = fresh(d->second.numbers.front());
      for (std::size_t i = 1; i < d->second.numbers.size(); ++i) {
        chain = Expr::binary(kind, std::move(chain), fresh(d->second.numbers[i]));
      }
      replacements.emplace(l.ref, std::move(chain));
    }
  }

  Derivation out{replace_literals(equations, replacements), std::move(slot_alignment)};
  materialize_irrelevant(out.alignment, numbers);
  return out;
}

AutoAlignResult auto_align(const WordProblem& problem) {
  if (detect_ambiguity(problem).ambiguous) return make_task(problem);
  AnnotationTask task = make_task(problem);
  if (!task.open_literals.empty()) {
    std::string which;
    for (const auto& open : task.open_literals) {
      if (!which.empty()) which += ", ";
      which += format_rational(open.value) + " at " + format_literal(open.literal);
    }
    throw UncoveredLiteral(problem.id + ": no textual number for " + which);
  }
  LiteralAlignment la;
  for (const auto& s : task.slots) la.numbers.emplace(s.literal, s.candidates.front());
  return induce_template(problem.gold_equations, la, problem.numbers);
}

WordProblem apply_human_decision(const AnnotationTask& task, const WordProblem& problem) {
  if (!task.decision) throw DecisionError("task " + task.id + " has no decision");
  const HumanDecision& d = *task.decision;

  for (const auto& [slot, id] : d.alignment) {
    auto it = std::find_if(task.slots.begin(), task.slots.end(), [&](const SlotSkeleton& s) { return s.slot == slot; });
    if (it == task.slots.end()) throw DecisionError(std::string("unknown slot ") + slot);
  }
  LiteralAlignment la;
  for (const auto& s : task.slots) {
    auto it = d.alignment.find(s.slot);
    if (it == d.alignment.end()) throw DecisionError(std::string("slot ") + s.slot + " unassigned");
    if (!problem.find_number(it->second)) throw DecisionError("unknown number '" + it->second + "'");
    if (std::find(s.candidates.begin(), s.candidates.end(), it->second) == s.candidates.end()) {
      throw DecisionError("number " + it->second + " is not a candidate for slot " + std::string(1, s.slot));
    }
    la.numbers.emplace(s.literal, it->second);
  }

  std::set<LiteralRef> resolved;
  auto is_open = [&](const LiteralRef& ref) {
    return std::any_of(task.open_literals.begin(), task.open_literals.end(),
                       [&](const OpenLiteral& o) { return o.literal == ref; });
  };
  for (const auto& dec : d.decompositions) {
    if (!is_open(dec.literal)) throw DecisionError("literal " + format_literal(dec.literal) + " is not open");
    for (const auto& id : dec.numbers) {
      if (!problem.find_number(id)) throw DecisionError("unknown number '" + id + "'");
    }
    if (!resolved.insert(dec.literal).second) {
      throw DecisionError("literal " + format_literal(dec.literal) + " resolved twice");
    }
    la.decompositions.emplace(dec.literal, dec);
  }
  for (const auto& ref : d.constants) {
    if (!is_open(ref)) throw DecisionError("literal " + format_literal(ref) + " is not open");
    if (!resolved.insert(ref).second) throw DecisionError("literal " + format_literal(ref) + " resolved twice");
  }
  for (const auto& open : task.open_literals) {
    if (!resolved.contains(open.literal)) {
      throw DecisionError("literal " + format_literal(open.literal) + " (" + format_rational(open.value) +
                          ") unresolved");
    }
  }

  for (const auto& [a, b] : d.equiv_tnum) {
    const auto* na = problem.find_number(a);
    const auto* nb = problem.find_number(b);
    if (!na || !nb) throw DecisionError("unknown number in equiv_tnum pair");
    if (a == b) throw DecisionError("equiv_tnum pair joins " + a + " to itself");
    if (na->value != nb->value) throw DecisionError("equiv_tnum pair " + a + "/" + b + " has different values");
    auto candidate = [&](const std::string& id) {
      return std::any_of(task.slots.begin(), task.slots.end(), [&](const SlotSkeleton& s) {
        return std::find(s.candidates.begin(), s.candidates.end(), id) != s.candidates.end();
      });
    };
    if (!candidate(a) || !candidate(b)) throw DecisionError("equiv_tnum pair " + a + "/" + b + " is not among candidates");
  }

  WordProblem out = problem;
  try {
    out.annotation = DerivationAnnotation{induce_template(problem.gold_equations, la, problem.numbers), d.equiv_tnum};
  } catch (const Error& e) {
    throw DecisionError(e.what());
  }
  if (auto problem_note = annotation_inconsistency(out, EquivConfig{})) {
    throw DecisionError("inconsistent instantiation: " + *problem_note);
  }
  return out;
}

}  // namespace derivcheck
