#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "derivcheck/annotate.hpp"
#include "derivcheck/annotation_store.hpp"
#include "derivcheck/corpus_io.hpp"
#include "derivcheck/eqparse.hpp"
#include "derivcheck/errors.hpp"
#include "derivcheck/linsolve.hpp"
#include "derivcheck/metrics.hpp"
#include "derivcheck/reconcile.hpp"
#include "derivcheck/server.hpp"
#include "derivcheck/task_io.hpp"

namespace derivcheck::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string gold, pred, in, out, report, tasks, decisions;
  std::uint64_t seed = kDefaultSeed;
  int rounds = 10;
  std::string tol;
  int port = 8080;
  std::string host = "127.0.0.1";
  ReferenceMode ref_mode = ReferenceMode::kFirst;
  bool no_slot_sharing = false;
  std::vector<std::string> equations;
};

EquivConfig equiv_config(const Options& o) {
  EquivConfig c;
  c.seed = o.seed;
  c.rounds = o.rounds;
  c.validate();
  return c;
}

LoadOptions load_options(const Options& o) { return LoadOptions{!o.no_slot_sharing}; }

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  return f;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

int finish(const std::vector<std::string>& warnings, std::ostream& err) {
  print_warnings(warnings, err);
  return warnings.empty() ? kExitOk : kExitWarnings;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  MetricConfig config;
  config.equiv = equiv_config(o);
  config.reference_mode = o.ref_mode;
  config.allow_slot_sharing = !o.no_slot_sharing;
  if (!o.tol.empty()) {
    try {
      config.tolerance = parse_rational(o.tol);
    } catch (const std::invalid_argument&) {
      throw Error("--tol: not a number: " + o.tol);
    }
    if (*config.tolerance < 0) throw Error("--tol must be non-negative");
  }
  const auto gold = load_corpus(o.gold, load_options(o));
  const auto predictions = load_predictions(o.pred, load_options(o));
  const MetricsReport report = evaluate_corpus(gold, predictions, config);
  const std::string report_path = o.report.empty() ? o.pred + ".report.jsonl" : o.report;
  auto f = open_out(report_path);
  write_report(report, f);
  out << format_table(report) << "report: " << report_path << '\n';
  return finish(report.warnings, err);
}

int cmd_reconcile(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = load_corpus(o.in, load_options(o));
  std::vector<Template> templates;
  std::vector<std::string> ids;
  std::vector<std::string> warnings;
  for (const auto& p : corpus) {
    if (!p.annotation) {
      warnings.push_back(p.id + ": no template annotation, skipped");
      continue;
    }
    templates.push_back(p.annotation->derivation.tmpl);
    ids.push_back(p.id);
  }
  const ReconcileResult r = reconcile_templates(templates, equiv_config(o));
  ordered_json report;
  report["templates"] = templates.size();
  report["classes"] = ordered_json::array();
  for (const auto& c : r.classes) {
    ordered_json members = ordered_json::array();
    for (std::size_t i : c) members.push_back(ids[i]);
    report["classes"].push_back(members);
  }
  report["representatives"] = ordered_json::array();
  for (const auto& t : r.representatives) report["representatives"].push_back(render_template(t));
  report["reduction"] = r.reduction;
  report["merged_pairs"] = ordered_json::array();
  for (const auto& [a, b] : r.merged_pairs) report["merged_pairs"].push_back({ids[a], ids[b]});
  report["config"] = {{"seed", o.seed}, {"rounds", o.rounds}};
  if (o.report.empty()) {
    out << report.dump(2) << '\n';
  } else {
    auto f = open_out(o.report);
    f << report.dump(2) << '\n';
    out << templates.size() << " templates -> " << r.classes.size() << " classes, reduction " << r.reduction
        << "\nreport: " << o.report << '\n';
  }
  return finish(warnings, err);
}

int cmd_detect(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = load_corpus(o.in, load_options(o));
  std::optional<std::ofstream> file;
  if (!o.out.empty()) file = open_out(o.out);
  std::ostream& sink = file ? *file : out;
  std::size_t ambiguous = 0;
  for (const auto& p : corpus) {
    const AmbiguityReport r = detect_ambiguity(p);
    ambiguous += r.ambiguous;
    ordered_json line{{"problem_id", r.problem_id}, {"ambiguous", r.ambiguous}, {"conflicts", ordered_json::array()}};
    for (const auto& c : r.conflicts) {
      ordered_json lits = ordered_json::array();
      for (const auto& l : c.literals) lits.push_back(format_literal(l));
      line["conflicts"].push_back({{"value", format_rational(c.value)}, {"numbers", c.numbers}, {"literals", lits}});
    }
    sink << line.dump() << '\n';
  }
  if (file) out << ambiguous << " of " << corpus.size() << " problems ambiguous\n";
  (void)err;
  return kExitOk;
}

int cmd_auto_annotate(const Options& o, std::ostream& out, std::ostream& err) {
  auto corpus = load_corpus(o.in, load_options(o));
  std::vector<AnnotationTask> tasks;
  std::vector<std::string> warnings;
  std::size_t automatic = 0, kept = 0;
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    WordProblem& p = corpus[i];
    position[p.id] = i;
    if (p.annotation) {
      ++kept;
      continue;
    }
    try {
      auto result = auto_align(p);
      if (auto* d = std::get_if<Derivation>(&result)) {
        p.annotation = DerivationAnnotation{std::move(*d), {}};
        if (auto note = annotation_inconsistency(p, equiv_config(o))) {
          warnings.push_back(p.id + ": " + *note);
          p.annotation.reset();
          tasks.push_back(make_task(p));
        } else {
          ++automatic;
        }
      } else {
        tasks.push_back(std::get<AnnotationTask>(std::move(result)));
      }
    } catch (const UncoveredLiteral& e) {
      warnings.push_back(std::string(e.what()) + "; sent to annotation");
      tasks.push_back(make_task(p));
    }
  }
  std::size_t resolved = 0;
  if (!o.decisions.empty()) {
    AnnotationStore store(tasks, o.decisions);
    for (const auto& w : store.replay_warnings()) warnings.push_back(w);
    for (auto& annotated : store.annotated()) {
      corpus[position.at(annotated.id)] = std::move(annotated);
      ++resolved;
    }
    tasks = store.tasks();
  }
  if (!o.tasks.empty()) {
    auto f = open_out(o.tasks);
    write_tasks(tasks, f);
  }
  if (!o.out.empty()) save_corpus(corpus, o.out);
  out << corpus.size() << " problems: " << kept << " already annotated, " << automatic << " auto-aligned, "
      << tasks.size() << " tasks (" << resolved << " resolved)\n";
  return finish(warnings, err);
}

int cmd_induce(const Options& o, std::ostream& out, std::ostream& err) {
  const auto corpus = load_corpus(o.in, load_options(o));
  std::optional<std::ofstream> file;
  if (!o.out.empty()) file = open_out(o.out);
  std::ostream& sink = file ? *file : out;
  std::vector<std::string> warnings;
  for (const auto& p : corpus) {
    std::optional<Derivation> d;
    if (p.annotation) {
      d = p.annotation->derivation;
    } else {
      try {
        auto result = auto_align(p);
        if (auto* derived = std::get_if<Derivation>(&result)) d = std::move(*derived);
        else warnings.push_back(p.id + ": ambiguous alignment, needs annotation");
      } catch (const UncoveredLiteral& e) {
        warnings.push_back(e.what());
      }
    }
    if (!d) continue;
    ordered_json line{{"problem_id", p.id},
                      {"template", render_template(d->tmpl)},
                      {"alignment", alignment_to_json(d->alignment)}};
    sink << line.dump() << '\n';
  }
  return finish(warnings, err);
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream&) {
  const Template system = parse_template(std::span<const std::string>(o.equations));
  if (!system.grounded()) throw Error("solve takes grounded equations; found slots");
  out << describe(solve(instantiate(system, Assignment{}))) << '\n';
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  AnnotationStore store(load_tasks(o.tasks), o.decisions);
  print_warnings(store.replay_warnings(), err);
  const Progress p = store.progress();
  out << "serving " << p.total << " tasks (" << p.done << " done) on http://" << o.host << ":" << o.port << std::endl;
  serve_annotation(store, o.host, o.port);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derivation-based evaluation of algebra word problem solvers", "derivcheck"};
  app.require_subcommand(1);
  Options o;

  const std::map<std::string, ReferenceMode> modes{{"first", ReferenceMode::kFirst}, {"random", ReferenceMode::kRandom}};
  auto add_equiv = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    sub->add_option("--rounds", o.rounds, "Random rounds per mapping")->capture_default_str()->check(CLI::PositiveNumber);
  };
  auto add_sharing = [&](CLI::App* sub) {
    sub->add_flag("--no-slot-sharing", o.no_slot_sharing, "Reject alignments that reuse a textual number");
  };

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against a gold corpus");
  evaluate->add_option("--gold", o.gold, "Gold corpus")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--pred", o.pred, "Predictions")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--report", o.report, "Report path (default: <pred>.report.jsonl)");
  evaluate->add_option("--tol", o.tol, "Solution tolerance (default: exact, 1/10000 for decimal predictions)");
  evaluate->add_option("--ref-mode", o.ref_mode, "Reference derivation for equation accuracy")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  add_equiv(evaluate);
  add_sharing(evaluate);

  auto* reconcile = app.add_subcommand("reconcile", "Merge equivalent templates of an annotated corpus");
  reconcile->add_option("--in", o.in, "Annotated corpus")->required()->check(CLI::ExistingFile);
  reconcile->add_option("--report", o.report, "Report path (default: stdout)");
  add_equiv(reconcile);
  add_sharing(reconcile);

  auto* detect = app.add_subcommand("detect-ambiguities", "Report alignment ambiguities");
  detect->add_option("--in", o.in, "Corpus")->required()->check(CLI::ExistingFile);
  detect->add_option("--out", o.out, "Output path (default: stdout)");
  add_sharing(detect);

  auto* annotate = app.add_subcommand("auto-annotate", "Align unambiguous problems, emit tasks for the rest");
  annotate->add_option("--in", o.in, "Corpus")->required()->check(CLI::ExistingFile);
  annotate->add_option("--out", o.out, "Annotated corpus output");
  annotate->add_option("--tasks", o.tasks, "Task file output");
  annotate->add_option("--decisions", o.decisions, "Decision log to merge");
  add_equiv(annotate);
  add_sharing(annotate);

  auto* induce = app.add_subcommand("induce-templates", "Print each problem's template and alignment");
  induce->add_option("--in", o.in, "Corpus")->required()->check(CLI::ExistingFile);
  induce->add_option("--out", o.out, "Output path (default: stdout)");
  add_sharing(induce);

  auto* solve_cmd = app.add_subcommand("solve", "Solve a grounded linear system");
  solve_cmd->add_option("equations", o.equations, "Equations, e.g. \"5*m=15*n\"")->required();

  auto* serve = app.add_subcommand("serve", "Run the annotation service");
  serve->add_option("--tasks", o.tasks, "Task file")->required()->check(CLI::ExistingFile);
  serve->add_option("--decisions", o.decisions, "Decision log (created if absent)")->required();
  serve->add_option("--port", o.port, "Port")->capture_default_str()->check(CLI::Range(1, 65535));
  serve->add_option("--host", o.host, "Bind address")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    if (*evaluate) return cmd_evaluate(o, out, err);
    if (*reconcile) return cmd_reconcile(o, out, err);
    if (*detect) return cmd_detect(o, out, err);
    if (*annotate) return cmd_auto_annotate(o, out, err);
    if (*induce) return cmd_induce(o, out, err);
    if (*solve_cmd) return cmd_solve(o, out, err);
    if (*serve) return cmd_serve(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace derivcheck::cli
