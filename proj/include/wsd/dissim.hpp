#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wsd/features.hpp"

namespace wsd {

/// Symmetric N x N feature-mismatch counts with a zero diagonal, stored as
/// the condensed strict upper triangle.
class DissimilarityMatrix {
public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(std::size_t n) : n_(n), cells_(n < 2 ? 0 : n * (n - 1) / 2, 0) {}

  std::size_t size() const { return n_; }

  std::uint16_t operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0;
    return cells_[index(i, j)];
  }
  void set(std::size_t i, std::size_t j, std::uint16_t v) { cells_[index(i, j)] = v; }

  const std::vector<std::uint16_t>& condensed() const { return cells_; }

  friend bool operator==(const DissimilarityMatrix&, const DissimilarityMatrix&) = default;

private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    // offset of row i in the strict upper triangle, then column
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  std::size_t n_ = 0;
  std::vector<std::uint16_t> cells_;
};

/// Dense row-major set of real-valued points.
class PointSet {
public:
  PointSet() = default;
  PointSet(std::size_t n, std::size_t dim) : n_(n), dim_(dim), data_(n * dim, 0.0) {}

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> operator[](std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> operator[](std::size_t i) { return {data_.data() + i * dim_, dim_}; }

private:
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

namespace dissim {

/// Mismatch counts between every pair of rows. Parallel over rows.
DissimilarityMatrix build(const FeatureMatrix& m);

/// Single-threaded reference for build().
DissimilarityMatrix build_serial(const FeatureMatrix& m);

/// Row i of the matrix as a point in N-dimensional space.
PointSet row_vectors(const DissimilarityMatrix& d);

/// Lower triangle including the diagonal: line i holds cells (i,0)..(i,i).
void write_triangular(std::ostream& out, const DissimilarityMatrix& d);

/// Accepts the triangular layout above or a full square matrix. Square input
/// must be symmetric with a zero diagonal.
DissimilarityMatrix read_matrix(std::istream& in);

}  // namespace dissim
}  // namespace wsd
