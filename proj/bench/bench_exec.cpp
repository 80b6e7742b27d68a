// Serial against OpenMP execution of witness enumeration and corpus
// verification.

#include <benchmark/benchmark.h>

#include "thinspan/collapse.hpp"
#include "thinspan/io.hpp"

using namespace thinspan;

namespace {

struct Workload {
  TypingContext ctx;
  Term term;
  PointSpec point;
  int budget;
};

// Many candidate points: every ordering of y and of h's elements.
Workload duplicator() {
  Workload w;
  w.ctx = parse_context("h:o->o->o, g:o->o, y:o");
  w.term = parse_term("(\\f:o->o. \\x:o. f (f x)) (\\z:o. h (g z) z) y");
  w.point = read_point(R"({"ctx": {"h": "[[*]-o[*]-o*, [*]-o[*]-o*, [*]-o[*]-o*]",
                                    "g": "[[*]-o*, [*]-o*, []-o*]",
                                    "y": "[*,*,*]"}, "type": "*"})");
  w.budget = 3;
  return w;
}

void positive_witnesses_exec(benchmark::State& state, Exec exec) {
  const auto w = duplicator();
  for (auto _ : state) {
    auto r = positive_witnesses(w.ctx, w.term, w.point, w.budget, exec);
    benchmark::DoNotOptimize(r.wit_plus);
  }
}

void corpus_exec(benchmark::State& state, Exec exec) {
  const auto entries = load_corpus(THINSPAN_CORPUS);
  for (auto _ : state) {
    auto rs = verify_corpus(entries, 4, exec);
    benchmark::DoNotOptimize(rs.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(positive_witnesses_exec, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(positive_witnesses_exec, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(corpus_exec, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(corpus_exec, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
