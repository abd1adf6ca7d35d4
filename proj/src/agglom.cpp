#include "wsd/agglom.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "wsd/rng.hpp"

namespace wsd {

WardState::WardState(const PointSet& points) : means_(points), sizes_(points.size(), 1) {}

double WardState::criterion(std::size_t a, std::size_t b) const {
  const auto ma = means_[a];
  const auto mb = means_[b];
  double d2 = 0.0;
#pragma omp simd reduction(+ : d2)
  for (std::size_t k = 0; k < ma.size(); ++k) {
    const double diff = ma[k] - mb[k];
    d2 += diff * diff;
  }
  return d2 / (1.0 / static_cast<double>(sizes_[a]) + 1.0 / static_cast<double>(sizes_[b]));
}

void WardState::merge(std::size_t into, std::size_t from) {
  const double na = static_cast<double>(sizes_[into]);
  const double nb = static_cast<double>(sizes_[from]);
  auto ma = means_[into];
  const auto mb = means_[from];
  for (std::size_t k = 0; k < ma.size(); ++k) ma[k] = (na * ma[k] + nb * mb[k]) / (na + nb);
  sizes_[into] += sizes_[from];
  sizes_[from] = 0;
}

namespace agglom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Condensed proximity table over cluster slots with a cached minimum per row
// (over columns j > i). Slot i always holds the cluster whose smallest
// member is i.
class ProximityTable {
public:
  explicit ProximityTable(std::size_t n)
      : n_(n), cells_(n < 2 ? 0 : n * (n - 1) / 2, 0.0), active_(n, 1), row_min_(n, kInf) {}

  std::size_t size() const { return n_; }
  bool active(std::size_t i) const { return active_[i] != 0; }
  double get(std::size_t i, std::size_t j) const { return cells_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { cells_[index(i, j)] = v; }

  void init_row_minima() {
    for (std::size_t i = 0; i < n_; ++i) recompute_row(i);
  }

  void recompute_row(std::size_t i) {
    double m = kInf;
    if (active_[i]) {
      for (std::size_t j = i + 1; j < n_; ++j)
        if (active_[j]) m = std::min(m, cells_[index(i, j)]);
    }
    row_min_[i] = m;
  }

  // Every active pair whose value is within tolerance of the global minimum,
  // in lexicographic (i, j) order.
  std::vector<std::pair<std::size_t, std::size_t>> minimal_pairs(double& minimum) const {
    double m = kInf;
    for (std::size_t i = 0; i < n_; ++i)
      if (active_[i]) m = std::min(m, row_min_[i]);
    const double limit = m + kTieTolerance * std::max(1.0, std::abs(m));
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!active_[i] || row_min_[i] > limit) continue;
      for (std::size_t j = i + 1; j < n_; ++j)
        if (active_[j] && cells_[index(i, j)] <= limit) out.emplace_back(i, j);
    }
    minimum = m;
    return out;
  }

  // Installs the merged cluster's proximities (new_row[i] for active i other
  // than a, b), retires slot b and repairs the cached row minima.
  void apply_merge(std::size_t a, std::size_t b, const std::vector<double>& new_row) {
    std::vector<std::size_t> stale;
    active_[b] = 0;
    row_min_[b] = kInf;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!active_[i] || i == a) continue;
      const double old_a = get(i, a);
      const double old_b = get(i, b);
      const double v = new_row[i];
      set(i, a, v);
      bool recompute = false;
      if (i < a) {
        if (v < row_min_[i]) row_min_[i] = v;
        else if (old_a <= row_min_[i]) recompute = true;
      }
      if (i < b && old_b <= row_min_[i]) recompute = true;
      if (recompute) stale.push_back(i);
    }
    recompute_row(a);
    for (std::size_t i : stale) recompute_row(i);
  }

private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  std::size_t n_;
  std::vector<double> cells_;
  std::vector<char> active_;
  std::vector<double> row_min_;
};

void check_k(std::size_t n, std::size_t k) {
  if (k == 0) throw std::invalid_argument("number of clusters must be at least 1");
  if (k > n) throw std::invalid_argument("number of clusters exceeds number of observations");
}

std::vector<std::size_t> labels_from(std::size_t n, const std::vector<Merge>& merges) {
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  for (const auto& m : merges) root[m.right] = m.left;
  // merged slots only ever point to smaller indices, so one forward pass resolves chains
  for (std::size_t i = 0; i < n; ++i) root[i] = root[root[i]];
  std::vector<std::size_t> label(n, 0);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (root[i] == i) label[i] = next++;
  }
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = label[root[i]];
  return out;
}

// Shared agglomeration loop; `update(a, b, row)` fills row[i] with the
// proximity between merged cluster a and each active cluster i.
template <class Update>
ClusterResult agglomerate(ProximityTable& table, std::size_t k, std::uint64_t seed, Update update) {
  const std::size_t n = table.size();
  Rng rng(seed);
  ClusterResult result;
  result.k = k;
  result.merges.reserve(n - k);
  std::vector<double> row(n, kInf);
  table.init_row_minima();
  for (std::size_t remaining = n; remaining > k; --remaining) {
    double minimum = 0.0;
    const auto ties = table.minimal_pairs(minimum);
    const auto pick = ties.size() == 1 ? 0 : rng.uniform_index(ties.size());
    const auto [a, b] = ties[pick];
    result.merges.push_back({a, b, table.get(a, b)});
    update(a, b, row);
    table.apply_merge(a, b, row);
  }
  result.assignment = labels_from(n, result.merges);
  return result;
}

}  // namespace

ClusterResult ward(const PointSet& points, std::size_t k, std::uint64_t seed) {
  const std::size_t n = points.size();
  check_k(n, k);
  WardState state(points);
  ProximityTable table(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j)
      table.set(static_cast<std::size_t>(i), j, state.criterion(static_cast<std::size_t>(i), j));
  }
  return agglomerate(table, k, seed, [&](std::size_t a, std::size_t b, std::vector<double>& row) {
    state.merge(a, b);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (ui != a && ui != b && table.active(ui)) row[ui] = state.criterion(a, ui);
    }
  });
}

ClusterResult mcquitty(const DissimilarityMatrix& d, std::size_t k, std::uint64_t seed) {
  const std::size_t n = d.size();
  check_k(n, k);
  ProximityTable table(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) table.set(i, j, d(i, j));
  return agglomerate(table, k, seed, [&](std::size_t a, std::size_t b, std::vector<double>& row) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i != a && i != b && table.active(i)) row[i] = (table.get(a, i) + table.get(b, i)) / 2.0;
    }
  });
}

std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> merge_members(
    std::size_t n, std::span<const Merge> merges) {
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> out;
  out.reserve(merges.size());
  for (const auto& m : merges) {
    if (m.left >= n || m.right >= n) throw std::out_of_range("merge refers to unknown observation");
    out.emplace_back(members[m.left], members[m.right]);
    auto& into = members[m.left];
    into.insert(into.end(), members[m.right].begin(), members[m.right].end());
    std::sort(into.begin(), into.end());
    members[m.right].clear();
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

void write_trace(std::ostream& out, std::size_t n, std::span<const Merge> merges) {
  const auto members = merge_members(n, merges);
  for (std::size_t s = 0; s < merges.size(); ++s) {
    out << s + 1 << '\t' << join(members[s].first) << '\t' << join(members[s].second) << '\t'
        << format_double(merges[s].criterion) << '\n';
  }
}

}  // namespace agglom
}  // namespace wsd
