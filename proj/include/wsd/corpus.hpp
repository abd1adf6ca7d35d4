#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsd {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised by the corpus reader; carries the 1-based line number at fault.
class CorpusError : public Error {
public:
  CorpusError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

enum class Pos { noun, verb, adjective, adverb, other };
inline constexpr std::size_t kPosCount = 5;

std::string_view to_string(Pos p);
std::optional<Pos> parse_pos(std::string_view s);

enum class Category { noun, verb, adjective };

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

/// ASCII case folding; bytes outside ASCII pass through unchanged.
std::string fold_case(std::string_view s);

struct Token {
  std::string text;    // as it appeared in the corpus
  std::string folded;  // case-folded text used for all counting
  Pos pos = Pos::other;
};

struct Instance {
  std::vector<Token> tokens;
  std::size_t target_index = 0;
  std::string morph;
  std::optional<std::string> gold_sense;

  const Token& target() const { return tokens[target_index]; }
};

struct WordSample {
  std::string word;
  Category category = Category::noun;
  std::vector<Instance> instances;
  std::vector<std::string> sense_inventory;

  std::size_t size() const { return instances.size(); }
  /// Index of a sense label in the inventory, if declared.
  std::optional<std::size_t> sense_index(std::string_view label) const;
};

/// Reads and validates a corpus in the line-delimited JSON format.
WordSample load_corpus(const std::string& path);
WordSample parse_corpus(std::istream& in);

/// Canonical serialization; parse_corpus(serialize_corpus(s)) == s.
std::string serialize_corpus(const WordSample& sample);

/// Gold sense proportions keyed by sense label, in inventory order.
std::vector<std::pair<std::string, double>> sense_distribution(const WordSample& sample);

/// Gold sense counts in inventory order; throws if any instance is untagged.
std::vector<std::size_t> sense_counts(const WordSample& sample);

}  // namespace wsd
