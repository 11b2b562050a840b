#pragma once

// Line-record corpus files. One JSON object per line:
//
//   corpus:     {id, text, numbers:[{id,value,start,end,surface}], equations:[..],
//                solution:[..], template:[..]?, alignment:[{q,slot}]?, equiv_tnum:[[q,q']]?}
//   prediction: {problem_id, template:[..], alignment:[{q,slot}], solution:[..]?}
//
// Rational values are strings ("12.75", "1/3"); JSON integers are accepted on
// input, JSON floats are rejected.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "derivcheck/model.hpp"

namespace derivcheck {

struct LoadOptions {
  // Two slots may align to the same textual number.
  bool allow_slot_sharing = true;
};

std::vector<WordProblem> load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});
std::vector<WordProblem> read_corpus(std::istream& in, const LoadOptions& options = {});
void save_corpus(const std::vector<WordProblem>& problems, const std::filesystem::path& path);
void write_corpus(const std::vector<WordProblem>& problems, std::ostream& out);

std::vector<Prediction> load_predictions(const std::filesystem::path& path, const LoadOptions& options = {});
std::vector<Prediction> read_predictions(std::istream& in, const LoadOptions& options = {});
void save_predictions(const std::vector<Prediction>& predictions, const std::filesystem::path& path);

nlohmann::ordered_json problem_to_json(const WordProblem& problem);
// `line` labels errors (0 = unknown).
WordProblem problem_from_json(const nlohmann::json& record, std::size_t line, const LoadOptions& options = {});
nlohmann::ordered_json prediction_to_json(const Prediction& prediction);
Prediction prediction_from_json(const nlohmann::json& record, std::size_t line, const LoadOptions& options = {});

// Checks every WordProblem invariant; throws CorpusError naming the field.
void validate_problem(const WordProblem& problem, const LoadOptions& options = {}, std::size_t line = 0);

Rational rational_from_json(const nlohmann::json& value, std::size_t line, const std::string& field);
nlohmann::ordered_json alignment_to_json(const Alignment& alignment);

}  // namespace derivcheck
