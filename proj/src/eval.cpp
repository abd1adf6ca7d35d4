#include "wsd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace wsd {

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::row_total(std::size_t r) const {
  std::size_t t = 0;
  for (std::size_t c = 0; c < cols(); ++c) t += at(r, c);
  return t;
}

std::size_t ConfusionMatrix::col_total(std::size_t c) const {
  std::size_t t = 0;
  for (std::size_t r = 0; r < rows(); ++r) t += at(r, c);
  return t;
}

}  // namespace wsd

namespace wsd::eval {

ConfusionMatrix confusion(const WordSample& sample, std::span<const std::size_t> assignment, std::size_t k) {
  if (assignment.size() != sample.instances.size())
    throw std::invalid_argument("assignment length does not match the sample");
  ConfusionMatrix cm;
  cm.senses = sample.sense_inventory;
  for (std::size_t c = 0; c < k; ++c) cm.clusters.push_back("c" + std::to_string(c));
  cm.counts.assign(cm.rows() * cm.cols(), 0);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const auto& g = sample.instances[i].gold_sense;
    if (!g) throw Error("instance " + std::to_string(i) + " has no gold sense");
    if (assignment[i] >= k) throw std::invalid_argument("cluster label out of range");
    ++cm.counts[*sample.sense_index(*g) * k + assignment[i]];
  }
  return cm;
}

namespace {

struct MappingSearch {
  const ConfusionMatrix& cm;
  std::size_t to_map;  // how many clusters must receive a sense
  std::vector<std::size_t> current;
  std::vector<char> used;
  std::vector<std::size_t> best;
  std::size_t best_score = 0;
  bool found = false;

  void run(std::size_t cluster, std::size_t mapped, std::size_t score) {
    const std::size_t unmapped = cm.rows();
    if (cluster == cm.cols()) {
      if (mapped == to_map && (!found || score > best_score)) {
        found = true;
        best_score = score;
        best = current;
      }
      return;
    }
    for (std::size_t s = 0; s < cm.rows(); ++s) {
      if (used[s]) continue;
      used[s] = 1;
      current[cluster] = s;
      run(cluster + 1, mapped + 1, score + cm.at(s, cluster));
      used[s] = 0;
    }
    // leave this cluster unmapped only if enough clusters remain to finish
    if (cm.cols() - cluster - 1 >= to_map - mapped) {
      current[cluster] = unmapped;
      run(cluster + 1, mapped, score);
    }
  }
};

}  // namespace

SenseMapping best_mapping(const ConfusionMatrix& cm) {
  if (cm.rows() > kMaxMappingSize || cm.cols() > kMaxMappingSize)
    throw std::invalid_argument("best_mapping: exhaustive search is limited to 8 senses and 8 clusters");
  if (cm.counts.size() != cm.rows() * cm.cols()) throw std::invalid_argument("best_mapping: malformed matrix");
  MappingSearch search{cm, std::min(cm.rows(), cm.cols()), std::vector<std::size_t>(cm.cols()),
                       std::vector<char>(cm.rows(), 0), {}, 0, false};
  search.run(0, 0, 0);
  SenseMapping m;
  m.agreement = search.best_score;
  for (std::size_t c = 0; c < cm.cols(); ++c) {
    if (search.best[c] < cm.rows()) m.cluster_to_sense.emplace_back(search.best[c]);
    else m.cluster_to_sense.emplace_back(std::nullopt);
  }
  return m;
}

MajorityResult majority_classifier(const WordSample& sample) {
  const auto counts = sense_counts(sample);
  if (sample.instances.empty()) throw Error("majority classifier on an empty sample");
  // max_element returns the first maximum, i.e. the earliest sense in the inventory
  const auto it = std::max_element(counts.begin(), counts.end());
  const auto s = static_cast<std::size_t>(it - counts.begin());
  return {sample.sense_inventory[s], static_cast<double>(*it) / static_cast<double>(sample.instances.size())};
}

AggregateReport aggregate(std::span<const double> accuracies) {
  if (accuracies.empty()) throw std::invalid_argument("aggregate: no trials");
  AggregateReport r;
  r.trials = accuracies.size();
  const double n = static_cast<double>(accuracies.size());
  r.mean = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / n;
  if (accuracies.size() > 1) {
    double ss = 0.0;
    for (double a : accuracies) ss += (a - r.mean) * (a - r.mean);
    r.stddev = std::sqrt(ss / (n - 1.0));
  }
  return r;
}

AggregateReport aggregate(std::span<const TrialReport> trials) {
  std::vector<double> acc;
  acc.reserve(trials.size());
  for (const auto& t : trials) acc.push_back(t.accuracy);
  return aggregate(acc);
}

Rollup category_rollup(std::span<const WordValue> values, std::span<const Category> categories,
                       OverallRollup overall) {
  if (categories.empty()) throw std::invalid_argument("category_rollup: no categories requested");
  Rollup out;
  double word_sum = 0.0;
  std::size_t word_count = 0;
  for (Category c : {Category::adjective, Category::noun, Category::verb}) {
    if (std::find(categories.begin(), categories.end(), c) == categories.end()) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& v : values) {
      if (v.category != c) continue;
      sum += v.value;
      ++count;
    }
    if (count == 0)
      throw std::invalid_argument("category_rollup: no words in category '" + std::string(to_string(c)) + "'");
    out.categories.emplace_back(c, sum / static_cast<double>(count));
    word_sum += sum;
    word_count += count;
  }
  if (overall == OverallRollup::mean_of_words) {
    out.overall = word_sum / static_cast<double>(word_count);
  } else {
    double s = 0.0;
    for (const auto& [c, v] : out.categories) s += v;
    out.overall = s / static_cast<double>(out.categories.size());
  }
  return out;
}

TTestResult t_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t_test: each sample needs at least two values");
  const auto ra = aggregate(a);
  const auto rb = aggregate(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double df = na + nb - 2.0;
  const double pooled = ((na - 1.0) * ra.stddev * ra.stddev + (nb - 1.0) * rb.stddev * rb.stddev) / df;
  TTestResult r;
  if (pooled == 0.0) {
    if (ra.mean == rb.mean) return r;
    r.t = ra.mean > rb.mean ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.significant = true;
    return r;
  }
  r.t = (ra.mean - rb.mean) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  // two-sided tail: P(|T| > t) = I_{df / (df + t^2)}(df / 2, 1 / 2)
  r.p = boost::math::ibeta(df / 2.0, 0.5, df / (df + r.t * r.t));
  r.significant = r.p < alpha;
  return r;
}

void print_confusion(std::ostream& out, const ConfusionMatrix& cm, const SenseMapping& mapping,
                     const std::string& label) {
  // column order: clusters mapped to sense 0, 1, ..., then unmapped clusters
  std::vector<std::size_t> order;
  std::vector<std::string> heads;
  for (std::size_t s = 0; s < cm.rows(); ++s) {
    for (std::size_t c = 0; c < cm.cols(); ++c) {
      if (c < mapping.cluster_to_sense.size() && mapping.cluster_to_sense[c] == s) {
        order.push_back(c);
        heads.push_back(cm.senses[s]);
      }
    }
  }
  for (std::size_t c = 0; c < cm.cols(); ++c) {
    if (std::find(order.begin(), order.end(), c) == order.end()) {
      order.push_back(c);
      heads.push_back(cm.clusters[c]);
    }
  }
  std::size_t w = std::string("Actual").size();
  for (const auto& s : cm.senses) w = std::max(w, s.size());
  std::size_t cw = std::to_string(cm.total()).size();
  for (const auto& h : heads) cw = std::max(cw, h.size());
  cw += 2;
  const auto pad = [](const std::string& s, std::size_t width) {
    return std::string(width > s.size() ? width - s.size() : 0, ' ') + s;
  };
  out << std::string(w, ' ') << " | " << "Discovered" << '\n';
  out << std::left << std::setw(static_cast<int>(w)) << "Actual" << std::right << " |";
  for (const auto& h : heads) out << pad(h, cw);
  out << " |\n";
  const std::size_t rule = w + 2 + cw * heads.size() + 2 + cw;
  out << std::string(rule, '-') << '\n';
  for (std::size_t r = 0; r < cm.rows(); ++r) {
    out << std::left << std::setw(static_cast<int>(w)) << cm.senses[r] << std::right << " |";
    for (std::size_t c : order) out << pad(std::to_string(cm.at(r, c)), cw);
    out << " |" << pad(std::to_string(cm.row_total(r)), cw) << '\n';
  }
  out << std::string(rule, '-') << '\n';
  out << std::string(w, ' ') << " |";
  for (std::size_t c : order) out << pad(std::to_string(cm.col_total(c)), cw);
  out << " |" << pad(std::to_string(cm.total()), cw) << '\n';
  out << '\n' << label << " - " << mapping.agreement << " correct\n";
}

ConfusionMatrix read_confusion(std::istream& in) {
  ConfusionMatrix cm;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (ss >> cell) cells.push_back(cell);
    if (!header) {
      if (cells.size() < 2) throw Error("confusion matrix: header needs a corner cell and cluster labels");
      cm.clusters.assign(cells.begin() + 1, cells.end());
      header = true;
      continue;
    }
    if (cells.size() != cm.clusters.size() + 1)
      throw Error("confusion matrix line " + std::to_string(lineno) + ": wrong number of cells");
    cm.senses.push_back(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      std::size_t pos = 0;
      long long v = -1;
      try {
        v = std::stoll(cells[c], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != cells[c].size() || v < 0)
        throw Error("confusion matrix line " + std::to_string(lineno) + ": bad count '" + cells[c] + "'");
      cm.counts.push_back(static_cast<std::size_t>(v));
    }
  }
  if (!header || cm.senses.empty()) throw Error("confusion matrix: no rows");
  return cm;
}

namespace {

std::string format_fixed(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  else if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  return s;
}

}  // namespace

std::string format_mean(double v) { return format_fixed(v, 3); }
std::string format_std(double v) { return format_fixed(v, 2); }

}  // namespace wsd::eval
