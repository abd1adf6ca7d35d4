// Command-line front end: one subcommand per pipeline stage plus the
// experiment runner.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wsd/agglom.hpp"
#include "wsd/corpus.hpp"
#include "wsd/dissim.hpp"
#include "wsd/em.hpp"
#include "wsd/eval.hpp"
#include "wsd/experiment.hpp"
#include "wsd/features.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to the named file, or stdout when the name is empty or "-".
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw wsd::Error("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wsd::Error("cannot open '" + path + "'");
  return in;
}

wsd::FeatureSetId feature_set(const std::string& s) {
  auto id = wsd::parse_feature_set(s);
  if (!id) throw UsageError("unknown feature set '" + s + "' (expected A, B or C)");
  return *id;
}

wsd::Category category(const std::string& s) {
  auto c = wsd::parse_category(s);
  if (!c) throw UsageError("unknown category '" + s + "' (expected noun, verb or adjective)");
  return *c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised word-sense discrimination: feature extraction, clustering, EM and evaluation"};
  app.require_subcommand(1);

  // extract
  std::string corpus_path, set_name = "A", stopwords_path, out_path;
  auto* extract_cmd = app.add_subcommand("extract", "Extract a feature table from a corpus file");
  extract_cmd->add_option("--corpus", corpus_path, "Corpus file (JSON lines)")->required();
  extract_cmd->add_option("--set", set_name, "Feature set: A, B or C");
  extract_cmd->add_option("--stopwords", stopwords_path, "Stopword list, one word per line");
  extract_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

  // dissim
  std::string features_path;
  auto* dissim_cmd = app.add_subcommand("dissim", "Build the mismatch dissimilarity matrix of a feature table");
  dissim_cmd->add_option("--features", features_path, "Feature table")->required();
  dissim_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

  // cluster
  std::string alg_name, dissim_path, trace_path;
  std::size_t k = 2;
  std::uint64_t seed = 0;
  auto* cluster_cmd = app.add_subcommand("cluster", "Agglomerative clustering of a dissimilarity matrix");
  cluster_cmd->add_option("--alg", alg_name, "ward or mcquitty")->required()->check(CLI::IsMember({"ward", "mcquitty"}));
  cluster_cmd->add_option("--dissim", dissim_path, "Dissimilarity matrix file")->required();
  cluster_cmd->add_option("--k", k, "Number of clusters")->required();
  cluster_cmd->add_option("--seed", seed, "Tie-breaking seed");
  cluster_cmd->add_option("-o,--output", out_path, "Assignment output (default stdout)");
  cluster_cmd->add_option("--trace", trace_path, "Write the merge trace here");

  // em
  wsd::EmOptions em_opts;
  auto* em_cmd = app.add_subcommand("em", "Fit a Naive Bayes mixture by EM");
  em_cmd->add_option("--features", features_path, "Feature table")->required();
  em_cmd->add_option("--k", k, "Number of senses")->required();
  em_cmd->add_option("--seed", seed, "Initialization seed");
  em_cmd->add_option("--max-iter", em_opts.max_iter, "Iteration limit");
  em_cmd->add_option("--tol", em_opts.tol, "Convergence threshold on parameter change");
  em_cmd->add_option("-o,--output", out_path, "Result JSON (default stdout)");

  // eval
  std::string confusion_path, assignments_path, label = "Clustering";
  auto* eval_cmd = app.add_subcommand("eval", "Map clusters to senses and report agreement");
  eval_cmd->add_option("--confusion", confusion_path, "Confusion matrix file");
  eval_cmd->add_option("--corpus", corpus_path, "Sense-tagged corpus");
  eval_cmd->add_option("--assignments", assignments_path, "Cluster label per instance, one per line");
  eval_cmd->add_option("--label", label, "Caption label, e.g. McQuitty");

  // dim
  std::string dim_set, dim_category;
  auto* dim_cmd = app.add_subcommand("dim", "Print feature-space dimensionality");
  dim_cmd->add_option("--set", dim_set, "Feature set: A, B or C");
  dim_cmd->add_option("--category", dim_category, "noun, verb or adjective");

  // run
  std::string config_path, run_output;
  int jobs = 1;
  bool dump_clusters = false;
  auto* run_cmd = app.add_subcommand("run", "Run a full experiment from a config file");
  run_cmd->add_option("--config", config_path, "Experiment config")->required();
  run_cmd->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--output", run_output, "Override the output directory");
  run_cmd->add_flag("--dump-clusters", dump_clusters, "Also write unmapped cluster assignments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (extract_cmd->parsed()) {
      const auto sample = wsd::load_corpus(corpus_path);
      const auto stop = stopwords_path.empty() ? wsd::Stoplist::builtin() : wsd::Stoplist::load(stopwords_path);
      const auto m = wsd::extract(sample, wsd::build_schema(sample, feature_set(set_name), stop), stop);
      Output out(out_path);
      wsd::write_feature_table(out.stream(), m);
    } else if (dissim_cmd->parsed()) {
      auto in = open_input(features_path);
      const auto d = wsd::dissim::build(wsd::read_feature_table(in));
      Output out(out_path);
      wsd::dissim::write_triangular(out.stream(), d);
    } else if (cluster_cmd->parsed()) {
      auto in = open_input(dissim_path);
      const auto d = wsd::dissim::read_matrix(in);
      if (k == 0 || k > d.size()) throw UsageError("--k must be between 1 and the number of observations");
      const auto result = alg_name == "ward" ? wsd::agglom::ward(wsd::dissim::row_vectors(d), k, seed)
                                             : wsd::agglom::mcquitty(d, k, seed);
      Output out(out_path);
      for (auto c : result.assignment) out.stream() << c << '\n';
      if (!trace_path.empty()) {
        Output trace(trace_path);
        wsd::agglom::write_trace(trace.stream(), d.size(), result.merges);
      }
    } else if (em_cmd->parsed()) {
      auto in = open_input(features_path);
      const auto data = wsd::read_feature_table(in);
      if (k == 0) throw UsageError("--k must be at least 1");
      if (data.rows() == 0) throw wsd::Error("feature table has no rows");
      const auto result = wsd::em::fit(data, k, seed, em_opts);
      Output out(out_path);
      wsd::em::write_result(out.stream(), result, data.schema());
    } else if (eval_cmd->parsed()) {
      wsd::ConfusionMatrix cm;
      if (!confusion_path.empty()) {
        auto in = open_input(confusion_path);
        cm = wsd::eval::read_confusion(in);
      } else if (!corpus_path.empty() && !assignments_path.empty()) {
        const auto sample = wsd::load_corpus(corpus_path);
        auto in = open_input(assignments_path);
        std::vector<std::size_t> labels;
        std::size_t v;
        while (in >> v) labels.push_back(v);
        std::size_t clusters = 0;
        for (auto l : labels) clusters = std::max(clusters, l + 1);
        cm = wsd::eval::confusion(sample, labels, clusters);
      } else {
        throw UsageError("eval needs --confusion, or --corpus with --assignments");
      }
      const auto mapping = wsd::eval::best_mapping(cm);
      wsd::eval::print_confusion(std::cout, cm, mapping, label);
      std::cout << "accuracy " << wsd::eval::format_mean(static_cast<double>(mapping.agreement) /
                                                         static_cast<double>(cm.total()))
                << '\n';
    } else if (dim_cmd->parsed()) {
      if (!dim_set.empty() && !dim_category.empty()) {
        std::cout << wsd::dimensionality(feature_set(dim_set), category(dim_category)) << '\n';
      } else {
        if (!dim_set.empty() || !dim_category.empty()) throw UsageError("dim needs both --set and --category, or neither");
        std::cout << "set\tadjective\tnoun\tverb\n";
        for (auto s : {wsd::FeatureSetId::A, wsd::FeatureSetId::B, wsd::FeatureSetId::C}) {
          std::cout << wsd::to_string(s);
          for (auto c : {wsd::Category::adjective, wsd::Category::noun, wsd::Category::verb})
            std::cout << '\t' << wsd::dimensionality(s, c);
          std::cout << '\n';
        }
      }
    } else if (run_cmd->parsed()) {
      auto config = wsd::experiment::load_config(config_path);
      if (!run_output.empty()) config.output_dir = run_output;
      if (dump_clusters) config.dump_clusters = true;
      const auto outcome = wsd::experiment::run(config, jobs);
      for (const auto& w : outcome.words)
        if (!w.error.empty()) std::cerr << "word " << w.name << ": " << w.error << '\n';
      std::size_t failed = 0;
      for (const auto& c : outcome.cells) {
        if (!c.failed()) continue;
        ++failed;
        std::cerr << "cell " << c.word << '/' << wsd::to_string(c.set) << '/' << wsd::experiment::to_string(c.algorithm)
                  << ": " << c.error << '\n';
      }
      std::cout << outcome.cells.size() - failed << " of " << outcome.cells.size() << " cells completed; reports in "
                << config.output_dir.string() << '\n';
      return outcome.any_failed() ? kExitFailure : kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
