#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsd/corpus.hpp"

namespace wsd {

/// Gold senses (rows) against discovered clusters (columns).
struct ConfusionMatrix {
  std::vector<std::string> senses;
  std::vector<std::string> clusters;
  std::vector<std::size_t> counts;  // row-major, senses x clusters

  std::size_t rows() const { return senses.size(); }
  std::size_t cols() const { return clusters.size(); }
  std::size_t at(std::size_t r, std::size_t c) const { return counts[r * cols() + c]; }
  std::size_t total() const;
  std::size_t row_total(std::size_t r) const;
  std::size_t col_total(std::size_t c) const;
};

/// Injective assignment of clusters to senses. Unmapped clusters (possible
/// when there are more clusters than senses) hold nullopt.
struct SenseMapping {
  std::vector<std::optional<std::size_t>> cluster_to_sense;
  std::size_t agreement = 0;
};

struct TrialReport {
  std::string word;
  std::string feature_set;
  std::string algorithm;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double accuracy = 0.0;
  SenseMapping mapping;
  ConfusionMatrix confusion;
};

struct AggregateReport {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single trial
  std::size_t trials = 0;
};

struct MajorityResult {
  std::string sense;
  double accuracy = 0.0;
};

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  bool significant = false;
};

struct WordValue {
  std::string word;
  Category category = Category::noun;
  double value = 0.0;
};

enum class OverallRollup {
  mean_of_categories,  // overall = mean of the per-category means
  mean_of_words,       // overall = mean over all words
};

struct Rollup {
  std::vector<std::pair<Category, double>> categories;
  double overall = 0.0;
};

namespace eval {

inline constexpr std::size_t kMaxMappingSize = 8;

ConfusionMatrix confusion(const WordSample& sample, std::span<const std::size_t> assignment, std::size_t k);

/// Exhaustive search over injective cluster-to-sense maps for maximal
/// agreement. Among equally good maps the lexicographically smallest (an
/// unmapped cluster ordering after every sense) is returned.
SenseMapping best_mapping(const ConfusionMatrix& cm);

MajorityResult majority_classifier(const WordSample& sample);

AggregateReport aggregate(std::span<const double> accuracies);
AggregateReport aggregate(std::span<const TrialReport> trials);

/// Unweighted mean per category, in adjective, noun, verb order, restricted
/// to `categories`. Throws if one of them has no words.
Rollup category_rollup(std::span<const WordValue> values, std::span<const Category> categories,
                       OverallRollup overall = OverallRollup::mean_of_categories);

/// Two-sided two-sample Student t-test with pooled variance.
TTestResult t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.01);

/// Table in the layout: actual senses as rows, discovered clusters as
/// columns (mapped clusters first, in sense order, labelled by their sense),
/// margins, then a caption line "<label> - <n> correct".
void print_confusion(std::ostream& out, const ConfusionMatrix& cm, const SenseMapping& mapping,
                     const std::string& label);

/// Tab- or space-separated matrix: a header row of cluster labels (after a
/// leading corner cell), then one row per sense: label followed by counts.
ConfusionMatrix read_confusion(std::istream& in);

/// ".844" style: three decimals, leading zero dropped below 1.
std::string format_mean(double v);
/// ".05" style: two decimals, leading zero dropped below 1.
std::string format_std(double v);

}  // namespace eval
}  // namespace wsd
