#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wsd/dissim.hpp"

namespace wsd {

/// One agglomeration step. Clusters are named by their smallest member, so
/// `left < right` and the merged cluster keeps the name `left`.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double criterion = 0.0;  // V_KL for Ward, D_KL for McQuitty

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct ClusterResult {
  std::size_t k = 0;
  /// Cluster label in [0, k) per observation; labels follow the order of
  /// each cluster's smallest member.
  std::vector<std::size_t> assignment;
  /// Exactly N - k merges, in the order performed.
  std::vector<Merge> merges;
};

/// Two candidate merges whose criteria differ by at most this (relative to
/// max(1, |criterion|)) are treated as tied.
inline constexpr double kTieTolerance = 1e-9;

/// Cluster means and sizes for Ward's method, kept exactly under merging.
class WardState {
public:
  explicit WardState(const PointSet& points);

  std::size_t size(std::size_t c) const { return sizes_[c]; }
  std::span<const double> mean(std::size_t c) const { return means_[c]; }

  /// Between-cluster variance ||mean_a - mean_b||^2 / (1/N_a + 1/N_b).
  double criterion(std::size_t a, std::size_t b) const;

  /// Folds cluster `from` into `into`; `from` must not be used afterwards.
  void merge(std::size_t into, std::size_t from);

private:
  PointSet means_;
  std::vector<std::size_t> sizes_;
};

namespace agglom {

/// Ward's minimum-variance method on the given points, stopping at k
/// clusters. Ties among minimizing pairs are broken uniformly at random from
/// `seed`.
ClusterResult ward(const PointSet& points, std::size_t k, std::uint64_t seed);

/// McQuitty's similarity analysis on mismatch counts: merge the closest pair
/// and set the new cluster's dissimilarity to every other cluster to the
/// mean of its two parts' dissimilarities.
ClusterResult mcquitty(const DissimilarityMatrix& d, std::size_t k, std::uint64_t seed);

/// Member lists of the two clusters joined at each merge.
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> merge_members(
    std::size_t n, std::span<const Merge> merges);

/// One line per merge: step, left members, right members, criterion.
void write_trace(std::ostream& out, std::size_t n, std::span<const Merge> merges);

}  // namespace agglom
}  // namespace wsd
