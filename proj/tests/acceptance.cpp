// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance             run every criterion
//   acceptance --only N    run criterion N
//   acceptance --scaling   multi-worker throughput ratio; exits 77 (skip)
//                          on machines with fewer than 4 hardware threads

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "more/corpus.hpp"
#include "more/eval.hpp"
#include "more/ontology.hpp"
#include "more/simmatrix.hpp"
#include "more/trainer.hpp"
#include "oracles.hpp"

using namespace more;
namespace fs = std::filesystem;

namespace {

const std::string kData = MORE_DATA_DIR;
constexpr int kSkip = 77;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

Vocabulary bundled_vocab(std::uint64_t min_count = 5) {
  return Vocabulary::build(count_tokens(std::vector<fs::path>{kData + "/synthetic_corpus.txt"}), min_count);
}

EncodedCorpus bundled_corpus(const Vocabulary& v) {
  return encode_corpus(std::vector<fs::path>{kData + "/synthetic_corpus.txt"}, v);
}

TrainingConfig config_for(int dim, int epochs, int per_checkpoint) {
  TrainingConfig c;
  c.dim = dim;
  c.window = 5;
  c.learning_rate = 0.025;
  c.total_epochs = epochs;
  c.epochs_per_checkpoint = per_checkpoint;
  return c;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  return {true,
          "not reproducible at desk scale: the reference correlations (0.633, 0.481) need RadCore, "
          "MIMIC-III and licensed MeSH; criteria 2-10 are the substitute property suites"};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  std::size_t pairs = 0, bad_path = 0, bad_lcs = 0, bad_measure = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 199);
    const auto dag = oracle::random_dag(rng, n);
    std::vector<ConceptLabel> labels;
    for (const auto& id : dag.ids) labels.push_back({id, "l" + id});
    std::vector<IsAEdge> edges;
    for (auto [c, p] : dag.edges) {
      edges.push_back({dag.ids[static_cast<std::size_t>(c)], dag.ids[static_cast<std::size_t>(p)]});
    }
    const auto g = OntologyGraph::build(labels, edges);
    const auto facts = oracle::analyse(n, dag.edges, dag.root);
    std::vector<ConceptIndex> lib(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) lib[static_cast<std::size_t>(k)] = g.require(dag.ids[static_cast<std::size_t>(k)]);

    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        ++pairs;
        const auto A = lib[static_cast<std::size_t>(a)], B = lib[static_cast<std::size_t>(b)];
        const int path = facts.dist[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] + 1;
        const int dl = oracle::lcs_depth(facts, a, b);
        const int da = facts.depth[static_cast<std::size_t>(a)], db = facts.depth[static_cast<std::size_t>(b)];
        if (shortest_path_len(g, A, B) != static_cast<std::uint32_t>(path)) ++bad_path;
        const auto geo = lcs(g, A, B);
        if (geo.lcs_depth != static_cast<std::uint32_t>(dl) || geo.path_len != static_cast<std::uint32_t>(path)) ++bad_lcs;
        const auto m = all_measures(g, A, B);
        const double ow = std::min(1.0, oracle::wup(da, db, dl));
        const double ol = oracle::lch(path, facts.max_depth);
        const double on = oracle::nam(path, facts.max_depth, dl);
        const double err = std::max({std::fabs(m.wup - ow), std::fabs(m.lch - ol), std::fabs(m.nam - on)});
        worst = std::max(worst, err);
        if (err > 1e-12) ++bad_measure;
      }
    }
  }
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf, "100 DAGs, %zu pairs: path mismatches=%zu lcs mismatches=%zu measure>1e-12=%zu "
                "(max err %.2e), %.1f s", pairs, bad_path, bad_lcs, bad_measure, worst, secs);
  return {bad_path == 0 && bad_lcs == 0 && bad_measure == 0 && secs < 60.0, buf};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xs(-30.0, 30.0), ss(0.0, 1.0);
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = xs(rng);
    const double s = rng() % 5 == 0 ? -1.0 : ss(rng);
    const double fd_p = (loss_positive(x + h, s) - loss_positive(x - h, s)) / (2 * h);
    const double fd_n = (loss_negative(x + h, s) - loss_negative(x - h, s)) / (2 * h);
    const double ep = std::fabs(grad_logit_positive(x, s) - fd_p) / std::max(std::fabs(fd_p), 1e-300);
    const double en = std::fabs(grad_logit_negative(x, s) - fd_n) / std::max(std::fabs(fd_n), 1e-300);
    worst = std::max({worst, ep, en});
  }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "1000 points, max relative error %.3e, %.3f s", worst, secs);
  return {worst < 1e-6 && secs < 5.0, buf};
}

Outcome criterion4() {
  const auto vocab = bundled_vocab();
  const auto corpus = bundled_corpus(vocab);
  auto cfg = config_for(100, 3, 3);
  cfg.seed = kDefaultSeed;
  TrainOptions more_opts, base_opts;
  base_opts.objective = Objective::baseline;
  const auto a = train(corpus, vocab, SimilarityMatrix{}, cfg, more_opts);
  const auto b = train(corpus, vocab, SimilarityMatrix{}, cfg, base_opts);
  bool losses_equal = a.epochs.size() == 3 && b.epochs.size() == 3;
  for (std::size_t e = 0; losses_equal && e < 3; ++e) losses_equal = a.epochs[e].mean_loss == b.epochs[e].mean_loss;
  const bool same = a.model.same_weights(b.model);
  std::ostringstream d;
  d << "3 epochs, " << corpus.token_count << " tokens, V=" << vocab.size()
    << ": weights " << (same ? "bit-identical" : "DIFFER") << ", epoch losses " << (losses_equal ? "identical" : "DIFFER");
  return {same && losses_equal && corpus.token_count >= 9000, d.str()};
}

// Lines where a and b take turns next to x inside a shared filler context.
std::vector<std::string> pull_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> filler{"f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7"};
  std::vector<std::string> lines;
  for (int i = 0; i < 400; ++i) {
    std::string line;
    for (int k = 0; k < 3; ++k) line += filler[rng() % filler.size()] + " ";
    line += (i % 2 == 0 ? "a x " : "b x ");
    for (int k = 0; k < 3; ++k) line += filler[rng() % filler.size()] + " ";
    lines.push_back(line);
  }
  return lines;
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  double sum = 0.0, logit_gap = 0.0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto lines = pull_corpus(1000 + seed);
    TokenCounts counts;
    for (const auto& l : lines) add_counts(counts, l);
    const auto vocab = Vocabulary::build(counts, 1);
    const auto corpus = encode_lines(lines, vocab);
    SimilarityMatrix m(vocab);
    m.set(*vocab.id("a"), *vocab.id("x"), 1.0);
    m.set(*vocab.id("b"), *vocab.id("x"), 0.0);
    auto cfg = config_for(20, 20, 10);
    cfg.window = 2;
    cfg.min_count = 1;
    cfg.subsample_threshold = 1.0;
    cfg.seed = seed;
    const auto r = train(corpus, vocab, m, cfg);
    const auto table = EmbeddingTable::from_model(r.model, vocab);
    const auto va = *term_vector("a", table), vb = *term_vector("b", table), vx = *term_vector("x", table);
    const double diff = cosine(va, vx) - cosine(vb, vx);
    sum += diff;
    logit_gap += logit(r.model, *vocab.id("a"), *vocab.id("x")) - logit(r.model, *vocab.id("b"), *vocab.id("x"));
    per_seed << (seed > 1 ? " " : "") << std::round(diff * 1000) / 1000;
  }
  const double mean = sum / 10.0;
  const double secs = seconds_since(t0);
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "mean[cos(a,x)-cos(b,x)] = %.4f over 10 seeds, 20 epochs (%s); mean[u_x.v_a-u_x.v_b] = %.3f, %.1f s",
                mean, per_seed.str().c_str(), logit_gap / 10.0, secs);
  return {mean > 0.01 && secs < 120.0, buf};
}

Outcome criterion6() {
  const auto g = OntologyGraph::parse(kData + "/toy1_edges.tsv", kData + "/toy1_labels.tsv");
  // Three-token vocabulary mapped 1:1 to A1, A2, B.
  const auto v3 = Vocabulary::build({{"a1", 3}, {"a2", 2}, {"b", 1}}, 1);
  const auto m3 = build_matrix(v3, g, intersect(v3, g));
  const TokenId a1 = *v3.id("a1"), a2 = *v3.id("a2"), b = *v3.id("b");

  // Hand pipeline: wup raw; lch and nam min-max over the six pairs, nam inverted.
  const double l6 = std::log(6.0);
  const double lch_a12 = (l6 - std::log(3.0) - (l6 - std::log(4.0))) / (l6 - (l6 - std::log(4.0)));
  const double nam_a12 = 1.0 - (std::log(4.0) - std::log(2.0)) / (std::log(8.0) - std::log(2.0));
  std::vector<double> p12{2.0 / 3.0, lch_a12, nam_a12};
  std::sort(p12.begin(), p12.end());
  std::vector<double> p1b{0.4, 0.0, 0.0};
  std::sort(p1b.begin(), p1b.end());
  const double want12 = static_cast<float>(p12[1]), want1b = static_cast<float>(p1b[1]);

  bool ok = m3.lookup(a1, a2) == 0.5 && want12 == 0.5 && m3.lookup(a1, b) == want1b &&
            m3.lookup(a2, b) == want1b && m3.pair_count() == 6;
  for (TokenId t : {a1, a2, b}) ok = ok && m3.lookup(t, t) == 1.0;
  ok = ok && build_matrix_serial(v3, g, intersect(v3, g)) == m3;

  // Same pair on the bundled corpus vocabulary (r and a mapped as well).
  const auto vb = bundled_vocab();
  const auto mb = build_matrix(vb, g, intersect(vb, g));
  const bool bundled = mb.lookup(*vb.id("a1"), *vb.id("a2")) == 0.5 && mb.lookup(*vb.id("a1"), *vb.id("a1")) == 1.0 &&
                       mb.lookup(*vb.id("r"), *vb.id("r")) == 1.0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "(a1,a2)=%.9g (a1,b)=%.9g self=%g,%g,%g; bundled vocab (a1,a2)=%.9g",
                m3.lookup(a1, a2), m3.lookup(a1, b), m3.lookup(a1, a1), m3.lookup(a2, a2), m3.lookup(b, b),
                mb.lookup(*vb.id("a1"), *vb.id("a2")));
  return {ok && bundled, buf};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng() % 496;
    std::vector<double> x(n), y(n);
    const double rho = std::uniform_real_distribution<double>(-0.9, 0.9)(rng);
    const bool ties = trial % 3 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ties ? std::round(nd(rng) * 2) : nd(rng);
      y[i] = rho * x[i] + std::sqrt(1 - rho * rho) * nd(rng);
    }
    const double r = pearson(x, y);
    const auto t = correlation_test(r, n);
    const auto o = oracle::correlation_test(oracle::pearson(x, y), static_cast<double>(n));
    worst = std::max({worst, std::fabs(r - oracle::pearson(x, y)), std::fabs(spearman(x, y) - oracle::spearman(x, y)),
                      std::fabs(t.t - o.t), std::fabs(t.p - o.p), std::fabs(t.ci_low - o.lo),
                      std::fabs(t.ci_high - o.hi)});
  }
  const auto w = correlation_test(0.5, 29);
  const double oracle_p = oracle::t_two_sided(3.0, 27.0);
  const bool worked = w.t == 3.0 && std::fabs(w.p - oracle_p) < 1e-6 && std::fabs(w.p - 0.0057457126426857545) < 1e-6;
  char buf[220];
  std::snprintf(buf, sizeof buf, "100 datasets, max |diff| %.2e; r=0.5 n=29: t=%.17g p=%.8f (oracle %.8f)", worst,
                w.t, w.p, oracle_p);
  return {worst < 1e-9 && worked, buf};
}

Outcome criterion8() {
  const auto ds = EvalDataset::load(kData + "/table1_sample.tsv");
  const auto vocab = bundled_vocab();
  const auto corpus = bundled_corpus(vocab);
  const auto model = train(corpus, vocab, SimilarityMatrix{}, config_for(50, 2, 2)).model;
  const auto table = EmbeddingTable::from_model(model, vocab);
  const auto combined = evaluate(table, ds, kCombinedGroup);
  bool ok = ds.pairs.size() == 10 && ds.groups.size() == 2 && combined.n == 20 && combined.excluded == 0;
  int exact = 0;
  for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
    auto injected = ds;
    injected.pairs[i].term1 += " zzunseen";
    const auto rep = evaluate(table, injected, kCombinedGroup);
    if (rep.n == 18 && rep.excluded_pairs == std::vector<std::size_t>{i}) ++exact;
  }
  ok = ok && exact == 10;
  char buf[200];
  std::snprintf(buf, sizeof buf, "combined n=%zu (r=%.3f); OOV injection excluded exactly the injected pair in %d/10 cases",
                combined.n, combined.r, exact);
  return {ok, buf};
}

Outcome criterion9() {
  const auto vocab = bundled_vocab();
  const auto corpus = bundled_corpus(vocab);
  const auto g = OntologyGraph::parse(kData + "/toy1_edges.tsv", kData + "/toy1_labels.tsv");
  const auto matrix = build_matrix(vocab, g, intersect(vocab, g));
  const auto cfg = config_for(50, 20, 10);
  const auto dir = fs::temp_directory_path() / "more_acceptance_c9";
  fs::remove_all(dir);

  TrainOptions opts;
  opts.checkpoint_dir = dir / "full";
  const auto full = train(corpus, vocab, matrix, cfg, opts);

  Trainer first(corpus, vocab, matrix, cfg);
  TrainOptions half_opts;
  half_opts.checkpoint_dir = dir / "half";
  continue_training(first, 10, half_opts);
  Trainer resumed = Trainer::resume(Checkpoint::load(checkpoint_path(dir / "half", 10)), corpus, vocab, matrix);
  const auto rest = continue_training(resumed, 20, {});
  const bool trajectory = rest.model.same_weights(full.model) && rest.model.step() == full.model.step() &&
                          rest.epochs.back().mean_loss == full.epochs.back().mean_loss;

  const auto reread = Checkpoint::load(checkpoint_path(dir / "full", 20));
  const bool ckpt_lossless = reread.model.same_weights(full.model) && reread.config == cfg && reread.epochs_done == 20;

  std::ostringstream text;
  export_text(full.model, vocab, text);
  std::istringstream in(text.str());
  const auto table = EmbeddingTable::load_text(in);
  double worst = 0.0;
  for (TokenId w = 0; w < vocab.size(); ++w) {
    const auto row = *table.find(vocab.token(w));
    const auto src = full.model.input(w);
    for (std::size_t k = 0; k < row.size(); ++k) {
      worst = std::max(worst, std::fabs(static_cast<double>(row[k]) - std::round(src[k] * 1e6) / 1e6));
    }
  }
  std::ostringstream again;
  again << table.size() << ' ' << table.dim() << '\n';
  char num[32];
  for (std::size_t r = 0; r < table.size(); ++r) {
    again << table.token(r);
    for (float x : table.row(r)) {
      std::snprintf(num, sizeof num, " %.6f", static_cast<double>(x));
      again << num;
    }
    again << '\n';
  }
  const bool export_lossless = worst <= 1e-6 && again.str() == text.str();
  char buf[240];
  std::snprintf(buf, sizeof buf, "resume@10->20 %s uninterrupted; checkpoint round trip %s; export max dev from "
                "6-dp rounding %.1e, re-export %s", trajectory ? "bit-equal to" : "DIFFERS from",
                ckpt_lossless ? "lossless" : "LOSSY", worst, again.str() == text.str() ? "identical" : "DIFFERS");
  return {trajectory && ckpt_lossless && export_lossless, buf};
}

// Corpus replicated to a size where timing is meaningful.
EncodedCorpus replicated(const EncodedCorpus& base, int copies) {
  EncodedCorpus out;
  for (int c = 0; c < copies; ++c) {
    out.lines.insert(out.lines.end(), base.lines.begin(), base.lines.end());
    out.token_count += base.token_count;
  }
  return out;
}

double throughput(const EncodedCorpus& corpus, const Vocabulary& vocab, int workers, int epochs,
                  std::vector<double>* losses = nullptr) {
  auto cfg = config_for(100, epochs, epochs);
  cfg.negatives = 5;
  cfg.workers = workers;
  const SimilarityMatrix none;
  Trainer t(corpus, vocab, none, cfg);
  std::uint64_t pairs = 0;
  double secs = 0.0;
  for (int e = 0; e < epochs; ++e) {
    const auto s = t.run_epoch();
    pairs += s.pairs;
    secs += s.seconds;
    if (losses) losses->push_back(s.mean_loss);
  }
  return static_cast<double>(pairs) / secs;
}

Outcome criterion10() {
  const auto vocab = bundled_vocab();
  const auto corpus = replicated(bundled_corpus(vocab), 5);
  const double single = throughput(corpus, vocab, 1, 2);

  std::vector<double> losses;
  const auto smoke = bundled_corpus(vocab);
  auto cfg = config_for(100, 5, 5);
  cfg.workers = 4;
  cfg.lr_schedule = LrSchedule::linear_decay;
  const SimilarityMatrix none;
  Trainer t(smoke, vocab, none, cfg);
  for (int e = 0; e < 5; ++e) losses.push_back(t.run_epoch().mean_loss);
  bool decreasing = true;
  for (std::size_t e = 1; e < losses.size(); ++e) decreasing = decreasing && losses[e] < losses[e - 1];

  std::ostringstream d;
  d.precision(4);
  d << "single-thread " << static_cast<long>(single) << " pairs/s at d=100, 5 negatives (floor 50000); "
    << "4-worker epoch losses";
  for (double l : losses) d << ' ' << l;
  d << (decreasing ? " (decreasing)" : " (NOT decreasing)") << "; scaling ratio: see 10b";
  return {single >= 50000.0 && decreasing, d.str()};
}

// Returns 1 pass, 0 fail, -1 skip.
int criterion10_scaling(std::string& detail) {
  const unsigned hw = std::thread::hardware_concurrency();
  const auto vocab = bundled_vocab();
  const auto corpus = replicated(bundled_corpus(vocab), 5);
  const double single = throughput(corpus, vocab, 1, 2);
  const double multi = throughput(corpus, vocab, 4, 2);
  const double ratio = multi / single;
  char buf[240];
  std::snprintf(buf, sizeof buf, "4 workers %.0f pairs/s vs 1 worker %.0f pairs/s: ratio %.2fx (need >= 2.5x); "
                "hardware threads %u", multi, single, ratio, hw);
  detail = buf;
  if (hw < 4) {
    detail += " -- fewer than 4 hardware threads, ratio cannot be measured here";
    return -1;
  }
  return ratio >= 2.5 ? 1 : 0;
}

void report(const std::string& id, const char* status, const std::string& detail) {
  std::printf("criterion %-3s %s  %s\n", id.c_str(), status, detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int only = 0;
  bool scaling_only = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--scaling") == 0) {
      scaling_only = true;
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N | --scaling]\n");
      return 2;
    }
  }

  auto run_scaling = [](bool& failed) {
    std::string detail;
    const int s = criterion10_scaling(detail);
    report("10b", s > 0 ? "PASS" : s == 0 ? "FAIL" : "SKIP", detail);
    if (s == 0) failed = true;
    return s;
  };

  bool failed = false;
  if (scaling_only) {
    const int s = run_scaling(failed);
    return s < 0 ? kSkip : failed ? 1 : 0;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && id != only) continue;
    Outcome o{false, ""};
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    report(std::to_string(id), id == 1 ? "NOTE" : o.pass ? "PASS" : "FAIL", o.detail);
    if (!o.pass) failed = true;
  }
  if (only == 0) run_scaling(failed);
  return failed ? 1 : 0;
}
