#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. Nothing here calls into the library's own algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------- graphs

struct RandomDag {
  std::vector<std::string> ids;                  // ids[k] for generated node k
  std::vector<std::pair<int, int>> edges;        // (child, parent), generated indices
  int root = 0;
};

// Node 0 is the root; every other node gets 1..3 parents among earlier nodes,
// so the graph is acyclic and rooted. Ids are shuffled so concept order in
// the library differs from generation order.
inline RandomDag random_dag(std::mt19937_64& rng, int n) {
  RandomDag d;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < n; ++i) d.ids.push_back("n" + std::to_string(1000 + perm[static_cast<std::size_t>(i)]));
  for (int i = 1; i < n; ++i) {
    const int k = 1 + static_cast<int>(rng() % 3);
    std::vector<int> ps;
    for (int j = 0; j < k; ++j) {
      const int p = static_cast<int>(rng() % static_cast<std::uint64_t>(i));
      if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
    }
    for (int p : ps) d.edges.emplace_back(i, p);
  }
  return d;
}

struct DagFacts {
  std::vector<std::vector<int>> dist;       // undirected edge counts
  std::vector<std::vector<bool>> ancestor;  // ancestor[a][c]: a is c or an ancestor of c
  std::vector<int> depth;                   // nodes from root, root = 1
  int max_depth = 0;
};

// Floyd-Warshall for distances and reachability.
inline DagFacts analyse(int n, const std::vector<std::pair<int, int>>& edges, int root) {
  constexpr int inf = std::numeric_limits<int>::max() / 4;
  const auto N = static_cast<std::size_t>(n);
  DagFacts f;
  f.dist.assign(N, std::vector<int>(N, inf));
  std::vector<std::vector<int>> down(N, std::vector<int>(N, inf));  // parent -> child directed
  f.ancestor.assign(N, std::vector<bool>(N, false));
  for (std::size_t i = 0; i < N; ++i) {
    f.dist[i][i] = 0;
    down[i][i] = 0;
    f.ancestor[i][i] = true;
  }
  for (auto [c, p] : edges) {
    const auto C = static_cast<std::size_t>(c), P = static_cast<std::size_t>(p);
    f.dist[C][P] = f.dist[P][C] = 1;
    down[P][C] = 1;
    f.ancestor[P][C] = true;
  }
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        f.dist[i][j] = std::min(f.dist[i][j], f.dist[i][k] + f.dist[k][j]);
        down[i][j] = std::min(down[i][j], down[i][k] + down[k][j]);
        if (f.ancestor[i][k] && f.ancestor[k][j]) f.ancestor[i][j] = true;
      }
    }
  }
  f.depth.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    f.depth[i] = down[static_cast<std::size_t>(root)][i] + 1;
    f.max_depth = std::max(f.max_depth, f.depth[i]);
  }
  return f;
}

inline int lcs_depth(const DagFacts& f, int a, int b) {
  int best = 0;
  for (std::size_t c = 0; c < f.depth.size(); ++c) {
    if (f.ancestor[c][static_cast<std::size_t>(a)] && f.ancestor[c][static_cast<std::size_t>(b)]) {
      best = std::max(best, f.depth[c]);
    }
  }
  return best;
}

inline double wup(int da, int db, int dl) { return 2.0 * dl / static_cast<double>(da + db); }
inline double lch(int path_nodes, int max_depth) {
  return std::log(2.0 * max_depth) - std::log(static_cast<double>(path_nodes));
}
inline double nam(int path_nodes, int max_depth, int dl) {
  return std::log(static_cast<double>((path_nodes - 1) * (max_depth - dl) + 2));
}

// ---------------------------------------------------------------- statistics

inline double mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

// Single-pass sums in long double.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const auto n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double cov = sxy - sx * sy / n;
  const long double vx = sxx - sx * sx / n;
  const long double vy = syy - sy * sy / n;
  return static_cast<double>(cov / std::sqrt(vx * vy));
}

// O(n^2) mid-ranks by counting.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) less += 1;
      else if (w == v[i]) equal += 1;
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

// Continued fraction for the regularised incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((a - 1.0 + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + 1.0 + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

// Two-sided Student-t tail: P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
inline double t_two_sided(double t, double df) {
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

struct Test {
  double t, p, lo, hi;
};

inline Test correlation_test(double r, double n) {
  Test out{};
  out.t = r * std::sqrt((n - 2.0) / (1.0 - r * r));
  out.p = t_two_sided(out.t, n - 2.0);
  const double z = 0.5 * std::log((1.0 + r) / (1.0 - r));
  const double se = 1.96 / std::sqrt(n - 3.0);
  auto back = [](double w) { return (std::exp(2.0 * w) - 1.0) / (std::exp(2.0 * w) + 1.0); };
  out.lo = back(z - se);
  out.hi = back(z + se);
  return out;
}

// ---------------------------------------------------------------- losses

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace oracle
