#include "wsd/dissim.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "wsd/corpus.hpp"

namespace wsd::dissim {

namespace {

std::uint16_t mismatches(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::uint16_t count = 0;
  for (std::size_t k = 0; k < a.size(); ++k) count += a[k] != b[k];
  return count;
}

void check_width(const FeatureMatrix& m) {
  if (m.cols() > std::numeric_limits<std::uint16_t>::max())
    throw Error("dissimilarity: too many features for 16-bit counts");
}

}  // namespace

DissimilarityMatrix build(const FeatureMatrix& m) {
  check_width(m);
  const std::size_t n = m.rows();
  DissimilarityMatrix d(n);
  // rows near the top of the triangle carry more work
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const auto ri = m.row(ui);
    for (std::size_t j = ui + 1; j < n; ++j) d.set(ui, j, mismatches(ri, m.row(j)));
  }
  return d;
}

DissimilarityMatrix build_serial(const FeatureMatrix& m) {
  check_width(m);
  const std::size_t n = m.rows();
  DissimilarityMatrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, mismatches(m.row(i), m.row(j)));
  return d;
}

PointSet row_vectors(const DissimilarityMatrix& d) {
  const std::size_t n = d.size();
  PointSet pts(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = pts[i];
    for (std::size_t j = 0; j < n; ++j) row[j] = d(i, j);
  }
  return pts;
}

void write_triangular(std::ostream& out, const DissimilarityMatrix& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) out << (j ? " " : "") << d(i, j);
    out << '\n';
  }
}

DissimilarityMatrix read_matrix(std::istream& in) {
  std::vector<std::vector<long long>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<long long> row;
    long long v;
    while (ss >> v) row.push_back(v);
    if (!ss.eof()) throw Error("dissimilarity matrix line " + std::to_string(rows.size() + 1) + ": not an integer");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  bool square = true;
  bool triangular = true;
  for (std::size_t i = 0; i < n; ++i) {
    square = square && rows[i].size() == n;
    triangular = triangular && rows[i].size() == i + 1;
  }
  if (!square && !triangular) throw Error("dissimilarity matrix is neither square nor lower-triangular");
  DissimilarityMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i][i] != 0) throw Error("dissimilarity matrix has a non-zero diagonal");
    for (std::size_t j = 0; j < i; ++j) {
      const long long v = rows[i][j];
      if (v < 0 || v > std::numeric_limits<std::uint16_t>::max())
        throw Error("dissimilarity value out of range");
      if (square && rows[j][i] != v) throw Error("dissimilarity matrix is not symmetric");
      d.set(i, j, static_cast<std::uint16_t>(v));
    }
  }
  return d;
}

}  // namespace wsd::dissim
