#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wsd/agglom.hpp"
#include "wsd/corpus.hpp"
#include "wsd/eval.hpp"
#include "wsd/features.hpp"
#include "wsd/rng.hpp"

namespace oracle {

using Table = std::vector<std::vector<int>>;

inline Table mismatch_counts(const Table& rows) {
  const std::size_t n = rows.size();
  Table d(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int c = 0;
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        if (rows[i][k] != rows[j][k]) ++c;
      d[i][j] = c;
    }
  return d;
}

inline wsd::FeatureMatrix to_matrix(const Table& rows, std::size_t card) {
  wsd::FeatureSchema s;
  const std::size_t q = rows.empty() ? 0 : rows[0].size();
  for (std::size_t j = 0; j < q; ++j) {
    wsd::FeatureDescriptor d;
    d.name = "F" + std::to_string(j);
    for (std::size_t v = 0; v < card; ++v) d.values.push_back(std::to_string(v));
    s.features.push_back(d);
  }
  wsd::FeatureMatrix m(s, rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t j = 0; j < q; ++j) m(r, j) = static_cast<std::uint32_t>(rows[r][j]);
  return m;
}

inline Table random_rows(std::mt19937_64& g, std::size_t n, std::size_t q, int card) {
  std::uniform_int_distribution<int> v(0, card - 1);
  Table t(n, std::vector<int>(q));
  for (auto& r : t)
    for (auto& x : r) x = v(g);
  return t;
}

/// Outcome of a from-scratch agglomeration: merges plus whether any step had
/// to choose among tied candidates.
struct Trace {
  std::vector<wsd::Merge> merges;
  bool saw_tie = false;
};

inline bool within_tie(double v, double m) {
  return v <= m + wsd::kTieTolerance * std::max(1.0, std::abs(m));
}

/// Picks among candidate pairs the same way the library documents it: pairs
/// named by smallest members, sorted, uniform draw from the seeded stream.
inline std::pair<std::size_t, std::size_t> choose(std::vector<std::pair<std::size_t, std::size_t>> cands,
                                                  wsd::Rng& rng, bool& saw_tie) {
  std::sort(cands.begin(), cands.end());
  if (cands.size() == 1) return cands[0];
  saw_tie = true;
  return cands[rng.uniform_index(cands.size())];
}

/// Ward: recompute every cluster mean from its members and every V_KL from
/// scratch at each step.
inline Trace ward(const std::vector<std::vector<double>>& pts, std::size_t k, std::uint64_t seed) {
  wsd::Rng rng(seed);
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < pts.size(); ++i) clusters.push_back({i});
  Trace tr;
  const auto mean = [&](const std::vector<std::size_t>& c) {
    std::vector<double> m(pts[0].size(), 0.0);
    for (auto i : c)
      for (std::size_t d = 0; d < m.size(); ++d) m[d] += pts[i][d];
    for (auto& x : m) x /= static_cast<double>(c.size());
    return m;
  };
  while (clusters.size() > k) {
    std::vector<std::vector<double>> means;
    for (const auto& c : clusters) means.push_back(mean(c));
    std::vector<std::tuple<double, std::size_t, std::size_t>> all;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double d2 = 0;
        for (std::size_t d = 0; d < means[a].size(); ++d) d2 += (means[a][d] - means[b][d]) * (means[a][d] - means[b][d]);
        const double v = d2 / (1.0 / static_cast<double>(clusters[a].size()) + 1.0 / static_cast<double>(clusters[b].size()));
        all.emplace_back(v, a, b);
        best = std::min(best, v);
      }
    std::vector<std::pair<std::size_t, std::size_t>> cands;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, double>> index;
    for (auto [v, a, b] : all) {
      if (!within_tie(v, best)) continue;
      auto key = std::minmax(clusters[a].front(), clusters[b].front());
      cands.push_back(key);
      index[key] = {a * 1000 + b, v};
    }
    const auto pick = choose(cands, rng, tr.saw_tie);
    const auto [code, v] = index[pick];
    const std::size_t a = code / 1000, b = code % 1000;
    tr.merges.push_back({pick.first, pick.second, v});
    auto merged = clusters[a];
    merged.insert(merged.end(), clusters[b].begin(), clusters[b].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
    clusters[a] = merged;
  }
  return tr;
}

/// McQuitty: the distance between two clusters is obtained by expanding the
/// averaging rule recursively down the merge tree to the original matrix,
/// always unfolding the more recently formed cluster first.
inline Trace mcquitty(const std::vector<std::vector<double>>& d0, std::size_t k, std::uint64_t seed) {
  const std::size_t n = d0.size();
  struct Node {
    std::size_t left = 0, right = 0;  // children (node ids) when merged
    std::size_t born = 0;             // 0 for leaves, step number otherwise
    std::size_t rep = 0;              // smallest member
  };
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({0, 0, 0, i});
  std::function<double(std::size_t, std::size_t)> dist = [&](std::size_t a, std::size_t b) -> double {
    if (nodes[a].born == 0 && nodes[b].born == 0) return d0[nodes[a].rep][nodes[b].rep];
    if (nodes[a].born < nodes[b].born) std::swap(a, b);
    return (dist(nodes[a].left, b) + dist(nodes[a].right, b)) / 2.0;
  };
  std::vector<std::size_t> live(n);
  std::iota(live.begin(), live.end(), std::size_t{0});
  wsd::Rng rng(seed);
  Trace tr;
  for (std::size_t step = 1; live.size() > k; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::tuple<double, std::size_t, std::size_t>> all;
    for (std::size_t a = 0; a < live.size(); ++a)
      for (std::size_t b = a + 1; b < live.size(); ++b) {
        const double v = dist(live[a], live[b]);
        all.emplace_back(v, a, b);
        best = std::min(best, v);
      }
    std::vector<std::pair<std::size_t, std::size_t>> cands;
    std::map<std::pair<std::size_t, std::size_t>, std::tuple<std::size_t, std::size_t, double>> index;
    for (auto [v, a, b] : all) {
      if (!within_tie(v, best)) continue;
      auto key = std::minmax(nodes[live[a]].rep, nodes[live[b]].rep);
      cands.push_back(key);
      index[key] = {a, b, v};
    }
    const auto pick = choose(cands, rng, tr.saw_tie);
    const auto [a, b, v] = index[pick];
    tr.merges.push_back({pick.first, pick.second, v});
    nodes.push_back({live[a], live[b], step, std::min(nodes[live[a]].rep, nodes[live[b]].rep)});
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(b));
    live[a] = nodes.size() - 1;
  }
  return tr;
}

/// Best agreement over all injective maps, by permuting padded sense lists.
inline std::size_t best_agreement(const wsd::ConfusionMatrix& cm) {
  const std::size_t slots = std::max(cm.rows(), cm.cols());
  std::vector<int> perm(slots);
  std::iota(perm.begin(), perm.end(), 0);  // perm[c] = sense for cluster c (>= rows means none)
  std::size_t best = 0;
  do {
    std::size_t score = 0;
    for (std::size_t c = 0; c < cm.cols(); ++c)
      if (static_cast<std::size_t>(perm[c]) < cm.rows()) score += cm.at(static_cast<std::size_t>(perm[c]), c);
    best = std::max(best, score);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Two-sided p-value of Student's t by adaptive Simpson quadrature of the
/// density over [0, |t|].
inline double t_density(double x, double df) {
  const double c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * M_PI);
  return std::exp(c - (df + 1) / 2 * std::log1p(x * x / df));
}

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                      double whole, double eps, int depth) {
  const double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

inline double t_two_sided_p(double t, double df) {
  const double x = std::abs(t);
  if (x == 0) return 1.0;
  const auto f = [df](double u) { return t_density(u, df); };
  const double fa = f(0), fb = f(x), fm = f(x / 2);
  const double area = simpson(f, 0, x, fa, fm, fb, x / 6 * (fa + 4 * fm + fb), 1e-13, 50);
  return 1.0 - 2.0 * area;
}

}  // namespace oracle
