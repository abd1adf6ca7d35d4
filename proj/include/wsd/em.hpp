#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "wsd/features.hpp"

namespace wsd {

/// Every stored probability is kept at or above this floor.
inline constexpr double kProbabilityFloor = 1e-12;

/// Naive Bayes mixture with the sense as a hidden nominal feature.
/// Parameterized by the priors P(s) and, per observed feature j, the joint
/// table P(s, f_j = v).
struct NaiveBayesParams {
  std::size_t k = 0;
  std::vector<double> priors;
  std::vector<std::size_t> cardinalities;
  std::vector<std::vector<double>> joints;  // joints[j][s * card_j + v]

  double joint(std::size_t j, std::size_t s, std::size_t v) const {
    return joints[j][s * cardinalities[j] + v];
  }
};

/// Expected sufficient statistics from one E-step, laid out like the
/// parameters they re-estimate.
struct ExpectedCounts {
  std::size_t k = 0;
  std::vector<std::size_t> cardinalities;
  std::vector<double> sense;                // count(s)
  std::vector<std::vector<double>> joints;  // count(s, f_j = v)
  double log_likelihood = 0.0;              // of the parameters the E-step used
};

struct EmOptions {
  std::size_t max_iter = 1000;
  double tol = 1e-6;
};

struct EmResult {
  NaiveBayesParams params;
  std::vector<double> posteriors;          // N x K row-major, P(s | y_n)
  std::vector<std::size_t> assignment;     // argmax of each posterior row
  std::vector<double> loglik_trace;        // entry t is the log-likelihood after t M-steps
  std::size_t iterations = 0;
  bool converged = false;
};

namespace em {

/// Posterior-weighted counts in log space, P(s | y) being proportional to
/// prod_j P(s, y_j) / P(s)^(q-1). Posteriors are computed in parallel and
/// accumulated in row order, so the result does not depend on thread count.
/// If `posteriors` is given it receives the N x K posterior matrix.
ExpectedCounts e_step(const NaiveBayesParams& params, const FeatureMatrix& data,
                      std::vector<double>* posteriors = nullptr);

/// Serial reference for e_step() that multiplies probabilities directly.
/// Only suitable for small q, where the products cannot underflow.
ExpectedCounts e_step_reference(const NaiveBayesParams& params, const FeatureMatrix& data,
                                std::vector<double>* posteriors = nullptr);

/// Counts implied by an explicit N x K posterior matrix.
ExpectedCounts counts_from_posteriors(const std::vector<double>& posteriors, std::size_t k,
                                      const FeatureMatrix& data);

/// P(s) = count(s)/N and P(s, v) = count(s, v)/N, with every entry lifted to
/// kProbabilityFloor while keeping each table normalized.
NaiveBayesParams m_step(const ExpectedCounts& counts, std::size_t n);

double log_likelihood(const NaiveBayesParams& params, const FeatureMatrix& data);

/// Largest absolute difference between corresponding parameters.
double max_param_change(const NaiveBayesParams& a, const NaiveBayesParams& b);

/// EM from random soft assignments (one uniform Dirichlet draw per instance).
EmResult fit(const FeatureMatrix& data, std::size_t k, std::uint64_t seed, const EmOptions& opts = {});

/// EM from the given N x K initial posterior matrix.
EmResult fit_from(const FeatureMatrix& data, std::size_t k, const std::vector<double>& initial_posteriors,
                  const EmOptions& opts = {});

struct SyntheticData {
  FeatureMatrix data;
  std::vector<std::size_t> labels;
  std::vector<double> priors;
  std::vector<std::vector<double>> conditionals;  // [j][c * card_j + v] = P(v | c)
};

/// Samples from a Naive Bayes mixture with uniform class prior. Each class
/// prefers one value per feature (distinct across classes where the
/// cardinality allows) with probability `separation`; the remaining mass is
/// spread evenly over the other values.
SyntheticData generate(std::size_t k, const FeatureSchema& schema, std::size_t n, double separation,
                       std::uint64_t seed);

/// JSON dump of parameter tables, log-likelihood trace and assignments.
void write_result(std::ostream& out, const EmResult& result, const FeatureSchema& schema);

}  // namespace em
}  // namespace wsd
