#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "wsd/corpus.hpp"

namespace wsd {

enum class FeatureSetId { A, B, C };

std::string_view to_string(FeatureSetId id);
std::optional<FeatureSetId> parse_feature_set(std::string_view s);

enum class FeatureKind {
  morphology,     // M
  pos,            // PL_i / PR_i
  cooccurrence,   // C_i
  collocation,    // UL_i / UR_i (any word) and CL_i / CR_i (content words only)
};

inline constexpr std::size_t kCollocationWords = 19;
inline constexpr std::size_t kCooccurrenceWords = 3;
inline constexpr std::string_view kNoneValue = "(none)";
inline constexpr std::string_view kNullValue = "(null)";

struct FeatureDescriptor {
  std::string name;
  FeatureKind kind = FeatureKind::pos;
  int offset = 0;               // position relative to the target (pos, collocation)
  bool content_only = false;    // collocation restricted to content words
  std::string word;             // watched word (cooccurrence); empty if unreachable
  std::vector<std::string> values;

  std::size_t cardinality() const { return values.size(); }
  std::optional<std::uint32_t> value_index(std::string_view v) const;
};

struct FeatureSchema {
  std::vector<FeatureDescriptor> features;

  std::size_t size() const { return features.size(); }
  std::vector<std::size_t> cardinalities() const;
};

/// N x q nominal value indices, row-major, aligned with the sample order.
class FeatureMatrix {
public:
  FeatureMatrix() = default;
  FeatureMatrix(FeatureSchema schema, std::size_t rows);

  const FeatureSchema& schema() const { return schema_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return schema_.size(); }

  std::uint32_t operator()(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  std::uint32_t& operator()(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  std::span<const std::uint32_t> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  const std::vector<std::uint32_t>& data() const { return values_; }

private:
  FeatureSchema schema_;
  std::size_t rows_ = 0;
  std::vector<std::uint32_t> values_;
};

/// Function words excluded from content-word counting. Matching is on
/// case-folded text.
class Stoplist {
public:
  /// Built-in list of determiners, prepositions, conjunctions, auxiliaries
  /// and punctuation. Pronouns are deliberately not included.
  static Stoplist builtin();
  /// One word per line; blank lines and lines starting with '#' ignored.
  static Stoplist load(const std::string& path);
  static Stoplist from_words(const std::vector<std::string>& words);

  bool contains(std::string_view folded) const { return words_.count(std::string(folded)) > 0; }

private:
  std::unordered_set<std::string> words_;
};

/// k most frequent content words over all sentences of the sample (token
/// occurrences), excluding the target word. Ties go to the lexicographically
/// smaller word.
std::vector<std::string> top_content_words(const WordSample& sample, std::size_t k,
                                           const Stoplist& stop = Stoplist::builtin());

/// k most frequent words found exactly `offset` positions from the target.
std::vector<std::string> top_positional_words(const WordSample& sample, int offset, bool content_only,
                                              std::size_t k, const Stoplist& stop = Stoplist::builtin());

FeatureSchema build_schema(const WordSample& sample, FeatureSetId set,
                           const Stoplist& stop = Stoplist::builtin());

/// Rows are computed in parallel when OpenMP is enabled.
FeatureMatrix extract(const WordSample& sample, const FeatureSchema& schema,
                      const Stoplist& stop = Stoplist::builtin());

/// Size of the feature space: the product of feature cardinalities, with
/// M taking 2 values for nouns, 7 for verbs and absent for adjectives.
std::uint64_t dimensionality(FeatureSetId set, Category category);

/// Tab-separated table: header of feature names, then one row of value
/// strings per instance.
void write_feature_table(std::ostream& out, const FeatureMatrix& m);

/// Reads a table written by write_feature_table. Alphabets are rebuilt from
/// the values observed, in order of first appearance.
FeatureMatrix read_feature_table(std::istream& in);

}  // namespace wsd
