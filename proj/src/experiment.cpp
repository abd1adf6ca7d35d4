#include "wsd/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "wsd/agglom.hpp"
#include "wsd/corpus.hpp"
#include "wsd/dissim.hpp"
#include "wsd/rng.hpp"

namespace wsd::experiment {

namespace fs = std::filesystem;

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::mcquitty: return "mcquitty";
    case Algorithm::ward: return "ward";
    case Algorithm::em: return "em";
  }
  return "mcquitty";
}

std::string_view display_name(Algorithm a) {
  switch (a) {
    case Algorithm::mcquitty: return "McQuitty";
    case Algorithm::ward: return "Ward";
    case Algorithm::em: return "EM";
  }
  return "McQuitty";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::mcquitty, Algorithm::ward, Algorithm::em}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (words.empty()) throw Error("config: at least one word is required");
  if (sets.empty()) throw Error("config: at least one feature set is required");
  if (algorithms.empty()) throw Error("config: at least one algorithm is required");
  if (trials == 0) throw Error("config: trials must be at least 1");
  if (confusion_trial >= trials) throw Error("config: confusion_trial must be below trials");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("config: alpha must be in (0, 1)");
  if (!(em.tol > 0.0)) throw Error("config: em_tol must be positive");
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = i + 1; j < words.size(); ++j)
      if (words[i].name == words[j].name) throw Error("config: duplicate word '" + words[i].name + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string w;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!w.empty()) out.push_back(std::move(w));
      w.clear();
    } else {
      w += c;
    }
  }
  if (!w.empty()) out.push_back(std::move(w));
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value, std::size_t line) {
  std::istringstream ss(value);
  T v{};
  ss >> v;
  if (!ss || !ss.eof())
    throw Error("config line " + std::to_string(line) + ": bad value for '" + key + "': " + value);
  return v;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir) {
  ExperimentConfig cfg;
  std::string section;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw Error("config line " + std::to_string(line) + ": malformed section header");
      section = trim(text.substr(1, text.size() - 2));
      if (section != "experiment" && section != "words")
        throw Error("config line " + std::to_string(line) + ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (section == "words") {
      cfg.words.push_back({key, resolve(base_dir, value)});
    } else if (section == "experiment") {
      if (key == "trials") {
        cfg.trials = parse_number<std::size_t>(key, value, line);
      } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value, line);
      } else if (key == "sets") {
        cfg.sets.clear();
        for (const auto& w : split_words(value)) {
          auto s = parse_feature_set(w);
          if (!s) throw Error("config line " + std::to_string(line) + ": unknown feature set '" + w + "'");
          cfg.sets.push_back(*s);
        }
      } else if (key == "algorithms") {
        cfg.algorithms.clear();
        for (const auto& w : split_words(value)) {
          auto a = parse_algorithm(w);
          if (!a) throw Error("config line " + std::to_string(line) + ": unknown algorithm '" + w + "'");
          cfg.algorithms.push_back(*a);
        }
      } else if (key == "output") {
        cfg.output_dir = resolve(base_dir, value);
      } else if (key == "stopwords") {
        cfg.stopwords = resolve(base_dir, value);
      } else if (key == "em_max_iter") {
        cfg.em.max_iter = parse_number<std::size_t>(key, value, line);
      } else if (key == "em_tol") {
        cfg.em.tol = parse_number<double>(key, value, line);
      } else if (key == "confusion_trial") {
        cfg.confusion_trial = parse_number<std::size_t>(key, value, line);
      } else if (key == "alpha") {
        cfg.alpha = parse_number<double>(key, value, line);
      } else if (key == "rollup") {
        if (value == "categories") cfg.rollup = OverallRollup::mean_of_categories;
        else if (value == "words") cfg.rollup = OverallRollup::mean_of_words;
        else throw Error("config line " + std::to_string(line) + ": rollup must be 'categories' or 'words'");
      } else if (key == "dump_clusters") {
        cfg.dump_clusters = value == "true" || value == "1" || value == "yes";
      } else {
        throw Error("config line " + std::to_string(line) + ": unknown key '" + key + "'");
      }
    } else {
      throw Error("config line " + std::to_string(line) + ": key outside of a section");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

std::uint64_t trial_seed(std::uint64_t master, const std::string& word, FeatureSetId set, Algorithm alg,
                         std::size_t trial) {
  return derive_seed(master, {std::string_view(word), to_string(set), to_string(alg), std::uint64_t{trial}});
}

bool RunOutcome::any_failed() const {
  return std::any_of(words.begin(), words.end(), [](const auto& w) { return !w.error.empty(); }) ||
         std::any_of(cells.begin(), cells.end(), [](const auto& c) { return c.failed(); });
}

namespace {

// Everything a trial needs for one (word, feature set); read-only once built.
struct Prepared {
  const WordSample* sample = nullptr;
  std::size_t k = 0;
  FeatureMatrix features;
  DissimilarityMatrix dissim;
  PointSet rows;
  std::string error;
};

struct Task {
  std::size_t cell = 0;
  std::size_t trial = 0;
};

struct TaskResult {
  TrialReport report;
  std::vector<std::size_t> assignment;
  std::string error;
};

}  // namespace

RunOutcome run(const ExperimentConfig& config, int threads) {
  config.validate();
  const Stoplist stop = config.stopwords ? Stoplist::load(config.stopwords->string()) : Stoplist::builtin();
  const bool need_dissim = std::any_of(config.algorithms.begin(), config.algorithms.end(),
                                       [](Algorithm a) { return a != Algorithm::em; });
  const bool need_rows =
      std::find(config.algorithms.begin(), config.algorithms.end(), Algorithm::ward) != config.algorithms.end();

  RunOutcome outcome;
  std::vector<std::unique_ptr<WordSample>> samples(config.words.size());
  for (std::size_t w = 0; w < config.words.size(); ++w) {
    WordSummary summary;
    summary.name = config.words[w].name;
    try {
      samples[w] = std::make_unique<WordSample>(load_corpus(config.words[w].corpus.string()));
      summary.category = samples[w]->category;
      summary.majority = eval::majority_classifier(*samples[w]);
    } catch (const std::exception& e) {
      summary.error = e.what();
    }
    outcome.words.push_back(std::move(summary));
  }

  std::vector<Prepared> prepared(config.words.size() * config.sets.size());
  for (std::size_t w = 0; w < config.words.size(); ++w) {
    for (std::size_t si = 0; si < config.sets.size(); ++si) {
      auto& p = prepared[w * config.sets.size() + si];
      if (!samples[w]) {
        p.error = "corpus failed to load: " + outcome.words[w].error;
        continue;
      }
      try {
        p.sample = samples[w].get();
        p.k = p.sample->sense_inventory.size();
        p.features = extract(*p.sample, build_schema(*p.sample, config.sets[si], stop), stop);
        if (need_dissim) p.dissim = dissim::build(p.features);
        if (need_rows) p.rows = dissim::row_vectors(p.dissim);
      } catch (const std::exception& e) {
        p.error = e.what();
      }
    }
  }

  std::vector<Task> tasks;
  for (std::size_t w = 0; w < config.words.size(); ++w) {
    for (std::size_t si = 0; si < config.sets.size(); ++si) {
      for (Algorithm alg : config.algorithms) {
        CellResult cell;
        cell.word = config.words[w].name;
        cell.set = config.sets[si];
        cell.algorithm = alg;
        cell.error = prepared[w * config.sets.size() + si].error;
        const std::size_t index = outcome.cells.size();
        outcome.cells.push_back(std::move(cell));
        if (outcome.cells.back().failed()) continue;
        for (std::size_t t = 0; t < config.trials; ++t) tasks.push_back({index, t});
      }
    }
  }

  const auto prepared_for = [&](std::size_t cell_index) -> const Prepared& {
    // cells are laid out word-major, then set, then algorithm
    const std::size_t per_word = config.sets.size() * config.algorithms.size();
    const std::size_t w = cell_index / per_word;
    const std::size_t si = (cell_index % per_word) / config.algorithms.size();
    return prepared[w * config.sets.size() + si];
  };

  std::vector<TaskResult> results(tasks.size());
  const auto n_tasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(threads, 1))
  for (std::ptrdiff_t ti = 0; ti < n_tasks; ++ti) {
    const Task task = tasks[static_cast<std::size_t>(ti)];
    const CellResult& cell = outcome.cells[task.cell];
    const Prepared& prep = prepared_for(task.cell);
    auto& res = results[static_cast<std::size_t>(ti)];
    try {
      const std::uint64_t seed = trial_seed(config.seed, cell.word, cell.set, cell.algorithm, task.trial);
      std::vector<std::size_t> assignment;
      switch (cell.algorithm) {
        case Algorithm::mcquitty: assignment = agglom::mcquitty(prep.dissim, prep.k, seed).assignment; break;
        case Algorithm::ward: assignment = agglom::ward(prep.rows, prep.k, seed).assignment; break;
        case Algorithm::em: assignment = em::fit(prep.features, prep.k, seed, config.em).assignment; break;
      }
      TrialReport& r = res.report;
      r.word = cell.word;
      r.feature_set = std::string(wsd::to_string(cell.set));
      r.algorithm = std::string(to_string(cell.algorithm));
      r.trial = task.trial;
      r.seed = seed;
      r.n = prep.sample->size();
      r.k = prep.k;
      r.confusion = eval::confusion(*prep.sample, assignment, prep.k);
      r.mapping = eval::best_mapping(r.confusion);
      r.accuracy = static_cast<double>(r.mapping.agreement) / static_cast<double>(r.n);
      res.assignment = std::move(assignment);
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  }

  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    auto& cell = outcome.cells[tasks[ti].cell];
    auto& res = results[ti];
    if (!res.error.empty()) {
      if (cell.error.empty()) cell.error = "trial " + std::to_string(tasks[ti].trial) + ": " + res.error;
      continue;
    }
    cell.trials.push_back(std::move(res.report));
    cell.assignments.push_back(std::move(res.assignment));
  }
  for (auto& cell : outcome.cells) {
    if (cell.failed()) {
      cell.trials.clear();
      cell.assignments.clear();
      continue;
    }
    cell.aggregate = eval::aggregate(std::span<const TrialReport>(cell.trials));
  }

  // ---- reports -----------------------------------------------------------
  fs::create_directories(config.output_dir);
  {
    std::ofstream out(config.output_dir / "results.jsonl", std::ios::binary);
    for (const auto& cell : outcome.cells) {
      for (const auto& t : cell.trials) {
        nlohmann::ordered_json j;
        j["word"] = t.word;
        j["set"] = t.feature_set;
        j["algorithm"] = t.algorithm;
        j["trial"] = t.trial;
        j["seed"] = t.seed;
        j["accuracy"] = t.accuracy;
        j["correct"] = t.mapping.agreement;
        j["n"] = t.n;
        j["k"] = t.k;
        out << j.dump() << '\n';
      }
    }
  }
  {
    std::ofstream out(config.output_dir / "aggregates.tsv", std::ios::binary);
    out << "word\tset\talgorithm\ttrials\tmean\tstd\tstatus\n";
    for (const auto& cell : outcome.cells) {
      out << cell.word << '\t' << wsd::to_string(cell.set) << '\t' << to_string(cell.algorithm) << '\t';
      if (cell.aggregate) {
        out << cell.aggregate->trials << '\t' << std::setprecision(17) << cell.aggregate->mean << '\t'
            << cell.aggregate->stddev << "\tok\n";
      } else {
        out << "0\t\t\tfailed: " << cell.error << '\n';
      }
    }
  }
  {
    std::ofstream out(config.output_dir / "table.txt", std::ios::binary);
    write_table(out, config, outcome);
  }
  fs::create_directories(config.output_dir / "confusion");
  for (std::size_t w = 0; w < config.words.size(); ++w) {
    for (FeatureSetId set : config.sets) {
      std::ostringstream body;
      for (const auto& cell : outcome.cells) {
        if (cell.word != config.words[w].name || cell.set != set || cell.failed()) continue;
        const auto& t = cell.trials[config.confusion_trial];
        eval::print_confusion(body, t.confusion, t.mapping, std::string(display_name(cell.algorithm)));
        body << '\n';
      }
      if (body.str().empty()) continue;
      std::ofstream out(config.output_dir / "confusion" /
                            (config.words[w].name + "_" + std::string(wsd::to_string(set)) + ".txt"),
                        std::ios::binary);
      out << config.words[w].name << " - Feature Set " << wsd::to_string(set) << " (trial "
          << config.confusion_trial << ")\n\n"
          << body.str();
    }
  }
  if (config.dump_clusters) {
    fs::create_directories(config.output_dir / "clusters");
    for (const auto& cell : outcome.cells) {
      if (cell.failed()) continue;
      std::ofstream out(config.output_dir / "clusters" /
                            (cell.word + "_" + std::string(wsd::to_string(cell.set)) + "_" +
                             std::string(to_string(cell.algorithm)) + ".tsv"),
                        std::ios::binary);
      out << "trial\tinstance\tcluster\n";
      for (std::size_t t = 0; t < cell.assignments.size(); ++t)
        for (std::size_t i = 0; i < cell.assignments[t].size(); ++i)
          out << t << '\t' << i << '\t' << cell.assignments[t][i] << '\n';
    }
  }
  return outcome;
}

namespace {

std::string cell_text(const AggregateReport& a, bool bold, bool underline) {
  std::string s;
  if (underline) s += '_';
  if (bold) s += '*';
  return s + eval::format_mean(a.mean) + "±" + eval::format_std(a.stddev);
}

std::vector<double> accuracies(const CellResult& c) {
  std::vector<double> v;
  for (const auto& t : c.trials) v.push_back(t.accuracy);
  return v;
}

// Pads by code points so the two-byte '±' lines up.
std::string pad_right(const std::string& s, std::size_t width) {
  std::size_t cps = 0;
  for (unsigned char c : s) cps += (c & 0xC0) != 0x80;
  return s + std::string(width > cps ? width - cps : 0, ' ');
}

}  // namespace

void write_table(std::ostream& out, const ExperimentConfig& config, const RunOutcome& outcome) {
  const std::size_t n_sets = config.sets.size();
  const std::size_t n_algs = config.algorithms.size();
  const std::size_t per_word = n_sets * n_algs;
  const auto cell_at = [&](std::size_t w, std::size_t si, std::size_t ai) -> const CellResult& {
    return outcome.cells[w * per_word + si * n_algs + ai];
  };
  const bool markers = config.trials >= 2;

  std::size_t name_w = std::string("adjectives").size();
  for (const auto& w : outcome.words) name_w = std::max(name_w, w.name.size());
  name_w += 2;
  constexpr std::size_t kCellW = 13;

  out << pad_right("", name_w) << pad_right("Maj.", 7);
  for (FeatureSetId set : config.sets)
    for (Algorithm alg : config.algorithms)
      out << pad_right(std::string(wsd::to_string(set)) + "/" + std::string(display_name(alg)), kCellW);
  out << '\n';

  const auto row_for_word = [&](std::size_t w) {
    const auto& word = outcome.words[w];
    out << pad_right(word.name, name_w)
        << pad_right(word.majority ? eval::format_mean(word.majority->accuracy) : "n/a", 7);
    // the word's best cell, for underlining
    const CellResult* best = nullptr;
    for (std::size_t i = 0; i < per_word; ++i) {
      const auto& c = outcome.cells[w * per_word + i];
      if (c.aggregate && (!best || c.aggregate->mean > best->aggregate->mean)) best = &c;
    }
    for (std::size_t si = 0; si < n_sets; ++si) {
      for (std::size_t ai = 0; ai < n_algs; ++ai) {
        const auto& c = cell_at(w, si, ai);
        if (!c.aggregate) {
          out << pad_right("n/a", kCellW);
          continue;
        }
        bool bold = false;
        bool underline = false;
        if (markers) {
          const auto mine = accuracies(c);
          for (std::size_t bi = 0; bi < n_algs; ++bi) {
            const auto& other = cell_at(w, si, bi);
            if (bi == ai || !other.aggregate || other.aggregate->mean >= c.aggregate->mean) continue;
            if (eval::t_test(mine, accuracies(other), config.alpha).significant) bold = true;
          }
          underline = &c == best || !(best->aggregate->mean > c.aggregate->mean &&
                                      eval::t_test(accuracies(*best), mine, config.alpha).significant);
        }
        out << pad_right(cell_text(*c.aggregate, bold, underline), kCellW);
      }
    }
    out << '\n';
  };

  // rollup row over the given words; the mean follows the per-word means,
  // the spread pools every trial of those words
  const auto rollup_row = [&](const std::string& label, const std::vector<std::size_t>& members,
                              bool overall_row) {
    out << pad_right(label, name_w);
    const auto rolled = [&](const std::vector<WordValue>& values) -> std::optional<double> {
      if (values.empty()) return std::nullopt;
      std::vector<Category> cats;
      for (const auto& v : values)
        if (std::find(cats.begin(), cats.end(), v.category) == cats.end()) cats.push_back(v.category);
      const auto r = eval::category_rollup(values, cats, overall_row ? config.rollup : OverallRollup::mean_of_categories);
      return overall_row ? r.overall : r.categories.front().second;
    };
    std::vector<WordValue> maj;
    for (std::size_t w : members)
      if (outcome.words[w].majority) maj.push_back({outcome.words[w].name, *outcome.words[w].category, outcome.words[w].majority->accuracy});
    const auto m = rolled(maj);
    out << pad_right(m ? eval::format_mean(*m) : "n/a", 7);
    for (std::size_t si = 0; si < n_sets; ++si) {
      for (std::size_t ai = 0; ai < n_algs; ++ai) {
        std::vector<WordValue> means;
        std::vector<double> pooled;
        for (std::size_t w : members) {
          const auto& c = cell_at(w, si, ai);
          if (!c.aggregate) continue;
          means.push_back({c.word, *outcome.words[w].category, c.aggregate->mean});
          for (const auto& t : c.trials) pooled.push_back(t.accuracy);
        }
        const auto mean = rolled(means);
        if (!mean) {
          out << pad_right("n/a", kCellW);
          continue;
        }
        AggregateReport a = eval::aggregate(pooled);
        a.mean = *mean;
        out << pad_right(cell_text(a, false, false), kCellW);
      }
    }
    out << '\n';
  };

  std::vector<std::size_t> all_known;
  static constexpr std::pair<Category, const char*> kGroups[] = {
      {Category::adjective, "adjectives"}, {Category::noun, "nouns"}, {Category::verb, "verbs"}};
  for (const auto& [cat, label] : kGroups) {
    std::vector<std::size_t> members;
    for (std::size_t w = 0; w < outcome.words.size(); ++w)
      if (outcome.words[w].category == cat) members.push_back(w);
    if (members.empty()) continue;
    for (std::size_t w : members) row_for_word(w);
    rollup_row(label, members, false);
    out << '\n';
    all_known.insert(all_known.end(), members.begin(), members.end());
  }
  if (!all_known.empty()) rollup_row("overall", all_known, true);
  for (std::size_t w = 0; w < outcome.words.size(); ++w)
    if (!outcome.words[w].category) out << pad_right(outcome.words[w].name, name_w) << "failed: " << outcome.words[w].error << '\n';
}

}  // namespace wsd::experiment
