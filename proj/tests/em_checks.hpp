#pragma once

// Structural checks on fitted Naive Bayes parameters, shared by the unit
// and acceptance suites.

#include <cmath>
#include <string>

#include "wsd/em.hpp"

namespace emcheck {

/// Empty when every normalization invariant holds, otherwise a description
/// of the first violation.
inline std::string normalization_problem(const wsd::NaiveBayesParams& p, double tol = 1e-9) {
  double prior_sum = 0;
  for (std::size_t s = 0; s < p.k; ++s) {
    if (p.priors[s] < wsd::kProbabilityFloor) return "prior below floor";
    prior_sum += p.priors[s];
  }
  if (std::abs(prior_sum - 1.0) > tol) return "priors sum to " + std::to_string(prior_sum);
  for (std::size_t j = 0; j < p.joints.size(); ++j) {
    double total = 0;
    for (std::size_t s = 0; s < p.k; ++s) {
      double margin = 0;
      for (std::size_t v = 0; v < p.cardinalities[j]; ++v) {
        const double x = p.joint(j, s, v);
        if (x < wsd::kProbabilityFloor) return "joint below floor";
        margin += x;
      }
      if (std::abs(margin - p.priors[s]) > tol) return "margin of feature " + std::to_string(j) + " disagrees with prior";
      total += margin;
    }
    if (std::abs(total - 1.0) > tol) return "joint of feature " + std::to_string(j) + " does not sum to 1";
  }
  return {};
}

/// Largest violation of sum_s count(s, f_j = v) = count(f_j = v).
inline double marginal_gap(const wsd::ExpectedCounts& c, const wsd::FeatureMatrix& data) {
  double worst = 0;
  for (std::size_t j = 0; j < data.cols(); ++j) {
    const std::size_t card = c.cardinalities[j];
    std::vector<double> observed(card, 0.0);
    for (std::size_t r = 0; r < data.rows(); ++r) observed[data(r, j)] += 1.0;
    for (std::size_t v = 0; v < card; ++v) {
      double sum = 0;
      for (std::size_t s = 0; s < c.k; ++s) sum += c.joints[j][s * card + v];
      worst = std::max(worst, std::abs(sum - observed[v]));
    }
  }
  return worst;
}

}  // namespace emcheck
