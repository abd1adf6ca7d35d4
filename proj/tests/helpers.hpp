#pragma once

// Small builders for hand-made samples.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <optional>
#include <utility>

#include <unistd.h>
#include <vector>

#include "wsd/corpus.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) { return std::string(WSD_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Instance from (text, pos) pairs; the target is given by index.
inline wsd::Instance instance(std::initializer_list<std::pair<const char*, wsd::Pos>> toks, std::size_t target,
                              std::string morph = "sg", std::optional<std::string> sense = std::nullopt) {
  wsd::Instance inst;
  for (const auto& [t, p] : toks) inst.tokens.push_back({t, wsd::fold_case(t), p});
  inst.target_index = target;
  inst.morph = std::move(morph);
  inst.gold_sense = std::move(sense);
  return inst;
}

/// Instance from whitespace-separated words, all tagged `other` except the
/// target, which takes the sample category's part of speech.
inline wsd::Instance sentence(const std::string& text, std::size_t target, std::string morph = "sg",
                              std::optional<std::string> sense = std::nullopt, wsd::Pos target_pos = wsd::Pos::noun) {
  wsd::Instance inst;
  std::istringstream ss(text);
  std::string w;
  while (ss >> w) inst.tokens.push_back({w, wsd::fold_case(w), wsd::Pos::other});
  inst.tokens.at(target).pos = target_pos;
  inst.target_index = target;
  inst.morph = std::move(morph);
  inst.gold_sense = std::move(sense);
  return inst;
}

inline wsd::WordSample sample(std::string word, wsd::Category cat, std::vector<std::string> senses,
                              std::vector<wsd::Instance> instances) {
  wsd::WordSample s;
  s.word = std::move(word);
  s.category = cat;
  s.sense_inventory = std::move(senses);
  s.instances = std::move(instances);
  return s;
}

/// A scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("wsd_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace testutil

#include "wsd/eval.hpp"

namespace testutil {

/// Accuracy of `assignment` against integer `labels` under the best
/// cluster-to-label mapping.
inline double mapped_accuracy(const std::vector<std::size_t>& labels, const std::vector<std::size_t>& assignment,
                              std::size_t k) {
  wsd::ConfusionMatrix cm;
  for (std::size_t i = 0; i < k; ++i) {
    cm.senses.push_back("s" + std::to_string(i));
    cm.clusters.push_back("c" + std::to_string(i));
  }
  cm.counts.assign(k * k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) ++cm.counts[labels[i] * k + assignment[i]];
  return static_cast<double>(wsd::eval::best_mapping(cm).agreement) / static_cast<double>(labels.size());
}

}  // namespace testutil
