// Serial reference vs OpenMP kernels: matrix construction and training epochs.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "more/corpus.hpp"
#include "more/ontology.hpp"
#include "more/simmatrix.hpp"
#include "more/trainer.hpp"

using namespace more;

namespace {

struct Fixture {
  Vocabulary vocab;
  OntologyGraph graph;
  WordConceptMap map;
};

// Random tree of n concepts, each labelled with its own vocabulary token.
Fixture random_fixture(int n) {
  std::mt19937_64 rng(7);
  std::vector<ConceptLabel> labels;
  std::vector<IsAEdge> edges;
  TokenCounts counts;
  for (int i = 0; i < n; ++i) {
    const std::string id = "C" + std::to_string(i), word = "w" + std::to_string(i);
    labels.push_back({id, word});
    counts[word] = 1 + rng() % 50;
    if (i > 0) edges.push_back({id, "C" + std::to_string(rng() % static_cast<std::uint64_t>(i))});
  }
  Fixture f{Vocabulary::build(counts, 1), OntologyGraph::build(labels, edges), {}};
  f.map = intersect(f.vocab, f.graph);
  return f;
}

void BM_MatrixSerial(benchmark::State& state) {
  const auto f = random_fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_matrix_serial(f.vocab, f.graph, f.map));
}

void BM_MatrixParallel(benchmark::State& state) {
  const auto f = random_fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_matrix(f.vocab, f.graph, f.map));
}

void BM_Epoch(benchmark::State& state) {
  const std::vector<std::filesystem::path> files{MORE_DATA_DIR "/synthetic_corpus.txt"};
  const auto vocab = Vocabulary::build(count_tokens(files), 5);
  const auto corpus = encode_corpus(files, vocab);
  const SimilarityMatrix none;
  TrainingConfig cfg;
  cfg.dim = 100;
  cfg.window = 5;
  cfg.learning_rate = 0.025;
  cfg.epochs_per_checkpoint = 1;
  cfg.total_epochs = 1;
  cfg.workers = static_cast<int>(state.range(0));
  std::uint64_t pairs = 0;
  for (auto _ : state) {
    Trainer t(corpus, vocab, none, cfg);
    pairs += t.run_epoch().pairs;
  }
  state.counters["pairs/s"] = benchmark::Counter(static_cast<double>(pairs), benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK(BM_MatrixSerial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixParallel)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Epoch)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
