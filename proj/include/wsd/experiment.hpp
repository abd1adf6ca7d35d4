#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsd/em.hpp"
#include "wsd/eval.hpp"
#include "wsd/features.hpp"

namespace wsd::experiment {

enum class Algorithm { mcquitty, ward, em };

std::string_view to_string(Algorithm a);       // "mcquitty", "ward", "em"
std::string_view display_name(Algorithm a);    // "McQuitty", "Ward", "EM"
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct WordEntry {
  std::string name;
  std::filesystem::path corpus;
};

struct ExperimentConfig {
  std::vector<WordEntry> words;
  std::vector<FeatureSetId> sets{FeatureSetId::A, FeatureSetId::B, FeatureSetId::C};
  std::vector<Algorithm> algorithms{Algorithm::mcquitty, Algorithm::ward, Algorithm::em};
  std::size_t trials = 25;
  std::uint64_t seed = 0;
  EmOptions em;
  std::optional<std::filesystem::path> stopwords;
  std::filesystem::path output_dir = "results";
  std::size_t confusion_trial = 0;
  OverallRollup rollup = OverallRollup::mean_of_categories;
  double alpha = 0.01;
  bool dump_clusters = false;

  /// Throws wsd::Error when an invariant is violated.
  void validate() const;
};

/// Parses the sectioned key-value format:
///
///   [experiment]
///   trials = 25
///   seed = 7
///   sets = A B C
///   algorithms = mcquitty ward em
///   output = results
///
///   [words]
///   concern = corpora/concern.jsonl
///
/// Relative paths are resolved against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// RNG stream seed for one trial of one experiment cell.
std::uint64_t trial_seed(std::uint64_t master, const std::string& word, FeatureSetId set, Algorithm alg,
                         std::size_t trial);

struct CellResult {
  std::string word;
  FeatureSetId set = FeatureSetId::A;
  Algorithm algorithm = Algorithm::mcquitty;
  std::vector<TrialReport> trials;
  std::vector<std::vector<std::size_t>> assignments;  // per trial, unmapped cluster labels
  std::optional<AggregateReport> aggregate;
  std::string error;

  bool failed() const { return !error.empty(); }
};

struct WordSummary {
  std::string name;
  std::optional<Category> category;
  std::optional<MajorityResult> majority;
  std::string error;
};

struct RunOutcome {
  std::vector<WordSummary> words;
  std::vector<CellResult> cells;  // ordered by (word, set, algorithm)

  bool any_failed() const;
};

/// Runs every (word, feature set, algorithm) cell for the configured number
/// of trials using up to `threads` workers, then writes the reports under
/// config.output_dir. Outputs do not depend on `threads`.
RunOutcome run(const ExperimentConfig& config, int threads = 1);

/// Figure-style results grid: mean±std per cell, majority baseline, category
/// and overall rollups. '*' marks a cell significantly more accurate than
/// another algorithm on the same feature set; '_' marks the word's best cell
/// and those not significantly less accurate.
void write_table(std::ostream& out, const ExperimentConfig& config, const RunOutcome& outcome);

}  // namespace wsd::experiment
