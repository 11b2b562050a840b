// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "derivcheck/equiv.hpp"
#include "derivcheck/metrics.hpp"
#include "derivcheck/reconcile.hpp"
#include "generators.hpp"

namespace dc = derivcheck;
namespace dt = derivcheck::testing;

namespace {

// Six slots: 720 mappings per comparison.
std::pair<dc::Template, dc::Template> six_slot_pair() {
  return {dc::parse_template({"A*m+B*n=C", "D*m+E*n=F"}), dc::parse_template({"x*Q+y*R=S", "T*x+U*y=V"})};
}

template <auto Fn>
void BM_TemplEquiv(benchmark::State& state) {
  const auto [a, b] = six_slot_pair();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b, dc::EquivConfig{}));
}

struct Corpus {
  std::vector<dc::WordProblem> problems;
  std::vector<dc::Prediction> predictions;
};

const Corpus& synthetic_corpus() {
  static const Corpus corpus = [] {
    Corpus c;
    dt::Rng rng(11);
    for (int i = 0; i < 64; ++i) {
      auto sp = dt::synthetic_problem(rng, "b" + std::to_string(i));
      c.predictions.push_back(dc::Prediction{sp.problem.id, sp.problem.annotation->derivation, std::nullopt, false});
      c.problems.push_back(std::move(sp.problem));
    }
    return c;
  }();
  return corpus;
}

template <auto Fn>
void BM_Evaluate(benchmark::State& state) {
  const auto& c = synthetic_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(c.problems, c.predictions, dc::MetricConfig{}));
}

const std::vector<dc::Template>& template_pool() {
  static const std::vector<dc::Template> pool = [] {
    dt::Rng rng(12);
    std::vector<dc::Template> ts;
    for (int i = 0; i < 24; ++i) {
      const auto spec = dt::random_linear_spec(rng, 2, 4);
      ts.push_back(dt::to_template(spec));
      ts.push_back(dt::to_template(dt::rearrange(spec, rng)));
    }
    return ts;
  }();
  return pool;
}

template <auto Fn>
void BM_Reconcile(benchmark::State& state) {
  const auto& ts = template_pool();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(ts, dc::EquivConfig{}));
}

}  // namespace

BENCHMARK(BM_TemplEquiv<&dc::templ_equiv>)->Name("templ_equiv/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TemplEquiv<&dc::templ_equiv_serial>)->Name("templ_equiv/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate<&dc::evaluate_corpus>)->Name("evaluate_corpus/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate<&dc::evaluate_corpus_serial>)->Name("evaluate_corpus/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reconcile<&dc::reconcile_templates>)->Name("reconcile/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reconcile<&dc::reconcile_templates_serial>)->Name("reconcile/serial")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
