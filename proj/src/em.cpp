#include "wsd/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "wsd/corpus.hpp"
#include "wsd/rng.hpp"

namespace wsd::em {

namespace {

void check_shape(const NaiveBayesParams& params, const FeatureMatrix& data) {
  if (params.cardinalities.size() != data.cols())
    throw std::invalid_argument("parameter tables do not match the number of features");
  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (params.cardinalities[j] < data.schema().features[j].cardinality())
      throw std::invalid_argument("parameter table smaller than feature alphabet");
  }
}

ExpectedCounts empty_counts(std::size_t k, const std::vector<std::size_t>& cards) {
  ExpectedCounts c;
  c.k = k;
  c.cardinalities = cards;
  c.sense.assign(k, 0.0);
  for (auto card : cards) c.joints.emplace_back(k * card, 0.0);
  return c;
}

void accumulate(ExpectedCounts& counts, const FeatureMatrix& data, const double* post) {
  const std::size_t n = data.rows();
  const std::size_t k = counts.k;
  for (std::size_t r = 0; r < n; ++r) {
    const double* p = post + r * k;
    const auto row = data.row(r);
    for (std::size_t s = 0; s < k; ++s) counts.sense[s] += p[s];
    for (std::size_t j = 0; j < row.size(); ++j) {
      const std::size_t card = counts.cardinalities[j];
      for (std::size_t s = 0; s < k; ++s) counts.joints[j][s * card + row[j]] += p[s];
    }
  }
}

// Mixes the distribution with the floor: floor + (1 - m * floor) * p. Keeps
// the total mass when the inputs sum to 1.
double lift(double p, std::size_t cells) {
  return kProbabilityFloor + (1.0 - static_cast<double>(cells) * kProbabilityFloor) * p;
}

}  // namespace

ExpectedCounts e_step(const NaiveBayesParams& params, const FeatureMatrix& data, std::vector<double>* posteriors) {
  check_shape(params, data);
  const std::size_t n = data.rows();
  const std::size_t k = params.k;
  const std::size_t q = data.cols();
  std::vector<double> log_prior(k);
  for (std::size_t s = 0; s < k; ++s) log_prior[s] = std::log(params.priors[s]);
  std::vector<std::vector<double>> log_joint(q);
  for (std::size_t j = 0; j < q; ++j) {
    log_joint[j].resize(params.joints[j].size());
    for (std::size_t i = 0; i < params.joints[j].size(); ++i) log_joint[j][i] = std::log(params.joints[j][i]);
  }

  std::vector<double> post(n * k);
  std::vector<double> row_loglik(n);
  const double prior_power = static_cast<double>(q) - 1.0;
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < sn; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    const auto row = data.row(ur);
    double* p = post.data() + ur * k;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < k; ++s) {
      double l = -prior_power * log_prior[s];
      for (std::size_t j = 0; j < q; ++j) l += log_joint[j][s * params.cardinalities[j] + row[j]];
      p[s] = l;
      best = std::max(best, l);
    }
    double total = 0.0;
    for (std::size_t s = 0; s < k; ++s) total += std::exp(p[s] - best);
    const double lse = best + std::log(total);
    for (std::size_t s = 0; s < k; ++s) p[s] = std::exp(p[s] - lse);
    row_loglik[ur] = lse;
  }

  ExpectedCounts counts = empty_counts(k, params.cardinalities);
  for (std::size_t r = 0; r < n; ++r) {
    if (!std::isfinite(row_loglik[r])) throw Error("degenerate likelihood for instance " + std::to_string(r));
    counts.log_likelihood += row_loglik[r];
  }
  accumulate(counts, data, post.data());
  if (posteriors) *posteriors = std::move(post);
  return counts;
}

ExpectedCounts e_step_reference(const NaiveBayesParams& params, const FeatureMatrix& data,
                                std::vector<double>* posteriors) {
  check_shape(params, data);
  const std::size_t n = data.rows();
  const std::size_t k = params.k;
  const std::size_t q = data.cols();
  std::vector<double> post(n * k);
  ExpectedCounts counts = empty_counts(k, params.cardinalities);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = data.row(r);
    double marginal = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      double joint = 1.0;
      for (std::size_t j = 0; j < q; ++j) joint *= params.joint(j, s, row[j]);
      joint /= std::pow(params.priors[s], static_cast<double>(q) - 1.0);
      post[r * k + s] = joint;
      marginal += joint;
    }
    if (!(marginal > 0.0)) throw Error("degenerate likelihood for instance " + std::to_string(r));
    for (std::size_t s = 0; s < k; ++s) post[r * k + s] /= marginal;
    counts.log_likelihood += std::log(marginal);
  }
  accumulate(counts, data, post.data());
  if (posteriors) *posteriors = std::move(post);
  return counts;
}

ExpectedCounts counts_from_posteriors(const std::vector<double>& posteriors, std::size_t k,
                                      const FeatureMatrix& data) {
  if (posteriors.size() != data.rows() * k) throw std::invalid_argument("posterior matrix has the wrong shape");
  ExpectedCounts counts = empty_counts(k, data.schema().cardinalities());
  accumulate(counts, data, posteriors.data());
  return counts;
}

NaiveBayesParams m_step(const ExpectedCounts& counts, std::size_t n) {
  if (n == 0) throw std::invalid_argument("m_step: sample size is zero");
  const std::size_t k = counts.k;
  double total = 0.0;
  for (double c : counts.sense) total += c;
  if (std::abs(total - static_cast<double>(n)) > 1e-6)
    throw std::invalid_argument("m_step: expected sense counts do not sum to the sample size");
  const double dn = static_cast<double>(n);
  NaiveBayesParams p;
  p.k = k;
  p.cardinalities = counts.cardinalities;
  p.priors.resize(k);
  for (std::size_t s = 0; s < k; ++s) p.priors[s] = lift(counts.sense[s] / dn, k);
  for (std::size_t j = 0; j < counts.joints.size(); ++j) {
    const auto& cj = counts.joints[j];
    std::vector<double> table(cj.size());
    for (std::size_t i = 0; i < cj.size(); ++i) table[i] = lift(cj[i] / dn, cj.size());
    p.joints.push_back(std::move(table));
  }
  return p;
}

double log_likelihood(const NaiveBayesParams& params, const FeatureMatrix& data) {
  return e_step(params, data).log_likelihood;
}

double max_param_change(const NaiveBayesParams& a, const NaiveBayesParams& b) {
  double m = 0.0;
  for (std::size_t s = 0; s < a.priors.size(); ++s) m = std::max(m, std::abs(a.priors[s] - b.priors[s]));
  for (std::size_t j = 0; j < a.joints.size(); ++j)
    for (std::size_t i = 0; i < a.joints[j].size(); ++i) m = std::max(m, std::abs(a.joints[j][i] - b.joints[j][i]));
  return m;
}

EmResult fit_from(const FeatureMatrix& data, std::size_t k, const std::vector<double>& initial_posteriors,
                  const EmOptions& opts) {
  if (k == 0) throw std::invalid_argument("EM needs at least one component");
  if (data.rows() == 0) throw std::invalid_argument("EM needs at least one instance");
  const std::size_t n = data.rows();
  EmResult result;
  result.params = m_step(counts_from_posteriors(initial_posteriors, k, data), n);
  auto counts = e_step(result.params, data, &result.posteriors);
  result.loglik_trace.push_back(counts.log_likelihood);
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    auto next = m_step(counts, n);
    const double change = max_param_change(next, result.params);
    result.params = std::move(next);
    counts = e_step(result.params, data, &result.posteriors);
    result.loglik_trace.push_back(counts.log_likelihood);
    result.iterations = it;
    if (change < opts.tol) {
      result.converged = true;
      break;
    }
  }
  result.assignment.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto first = result.posteriors.begin() + static_cast<std::ptrdiff_t>(r * k);
    result.assignment[r] = static_cast<std::size_t>(std::max_element(first, first + static_cast<std::ptrdiff_t>(k)) - first);
  }
  return result;
}

EmResult fit(const FeatureMatrix& data, std::size_t k, std::uint64_t seed, const EmOptions& opts) {
  if (k == 0) throw std::invalid_argument("EM needs at least one component");
  Rng rng(seed);
  std::vector<double> init(data.rows() * k);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    double total = 0.0;
    for (std::size_t s = 0; s < k; ++s) total += init[r * k + s] = rng.exponential();
    for (std::size_t s = 0; s < k; ++s) init[r * k + s] /= total;
  }
  return fit_from(data, k, init, opts);
}

namespace {

std::size_t sample_categorical(Rng& rng, const double* probs, std::size_t count) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return count - 1;
}

}  // namespace

SyntheticData generate(std::size_t k, const FeatureSchema& schema, std::size_t n, double separation,
                       std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("generate: k must be at least 1");
  if (!(separation > 0.0 && separation <= 1.0)) throw std::invalid_argument("generate: separation must be in (0, 1]");
  Rng rng(seed);
  SyntheticData out;
  out.priors.assign(k, 1.0 / static_cast<double>(k));
  for (const auto& f : schema.features) {
    const std::size_t card = f.cardinality();
    if (card == 0) throw std::invalid_argument("generate: feature '" + f.name + "' has an empty alphabet");
    std::vector<double> table(k * card, 0.0);
    const std::size_t base = rng.uniform_index(card);
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t preferred = (base + c) % card;
      for (std::size_t v = 0; v < card; ++v) {
        if (card == 1) table[c * card + v] = 1.0;
        else table[c * card + v] = v == preferred ? separation : (1.0 - separation) / static_cast<double>(card - 1);
      }
    }
    out.conditionals.push_back(std::move(table));
  }
  out.data = FeatureMatrix(schema, n);
  out.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t c = sample_categorical(rng, out.priors.data(), k);
    out.labels[r] = c;
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const std::size_t card = schema.features[j].cardinality();
      out.data(r, j) = static_cast<std::uint32_t>(sample_categorical(rng, out.conditionals[j].data() + c * card, card));
    }
  }
  return out;
}

void write_result(std::ostream& out, const EmResult& result, const FeatureSchema& schema) {
  nlohmann::ordered_json j;
  const auto& p = result.params;
  j["k"] = p.k;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["priors"] = p.priors;
  auto features = nlohmann::ordered_json::array();
  for (std::size_t f = 0; f < p.joints.size(); ++f) {
    nlohmann::ordered_json fj;
    fj["name"] = f < schema.size() ? schema.features[f].name : "f" + std::to_string(f);
    if (f < schema.size()) fj["values"] = schema.features[f].values;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < p.k; ++s) {
      const auto first = p.joints[f].begin() + static_cast<std::ptrdiff_t>(s * p.cardinalities[f]);
      rows.push_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(p.cardinalities[f])));
    }
    fj["joint"] = std::move(rows);
    features.push_back(std::move(fj));
  }
  j["features"] = std::move(features);
  j["loglik_trace"] = result.loglik_trace;
  j["assignment"] = result.assignment;
  out << j.dump(2) << '\n';
}

}  // namespace wsd::em
