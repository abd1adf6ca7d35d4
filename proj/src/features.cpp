#include "wsd/features.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace wsd {

std::string_view to_string(FeatureSetId id) {
  switch (id) {
    case FeatureSetId::A: return "A";
    case FeatureSetId::B: return "B";
    case FeatureSetId::C: return "C";
  }
  return "A";
}

std::optional<FeatureSetId> parse_feature_set(std::string_view s) {
  if (s == "A" || s == "a") return FeatureSetId::A;
  if (s == "B" || s == "b") return FeatureSetId::B;
  if (s == "C" || s == "c") return FeatureSetId::C;
  return std::nullopt;
}

std::optional<std::uint32_t> FeatureDescriptor::value_index(std::string_view v) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == v) return static_cast<std::uint32_t>(i);
  }
  return std::nullopt;
}

std::vector<std::size_t> FeatureSchema::cardinalities() const {
  std::vector<std::size_t> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(f.cardinality());
  return out;
}

FeatureMatrix::FeatureMatrix(FeatureSchema schema, std::size_t rows)
    : schema_(std::move(schema)), rows_(rows), values_(rows * schema_.size(), 0) {}

// ---------------------------------------------------------------------------
// Stoplist

Stoplist Stoplist::builtin() {
  static const std::vector<std::string> kWords = {
      // determiners
      "a", "an", "the", "this", "that", "these", "those", "some", "any", "each", "every", "no",
      "all", "both", "either", "neither", "another", "such",
      // prepositions
      "of", "in", "on", "at", "to", "for", "with", "by", "from", "about", "into", "onto", "over",
      "after", "before", "under", "between", "through", "during", "without", "against", "among",
      "than", "as", "up", "out", "off", "down", "per", "via", "upon", "within", "across", "around",
      "behind", "below", "above", "beyond", "near", "toward", "towards",
      // conjunctions
      "and", "or", "but", "nor", "so", "yet", "if", "because", "while", "although", "though",
      "whether", "since", "unless", "until", "whereas",
      // auxiliaries and clitics
      "be", "is", "am", "are", "was", "were", "been", "being", "have", "has", "had", "having",
      "do", "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might",
      "must", "'s", "n't", "'d", "'ll", "'re", "'ve", "'m", "not",
      // punctuation
      ".", ",", ";", ":", "!", "?", "'", "\"", "``", "''", "`", "--", "-", "(", ")", "[", "]",
      "{", "}", "...", "$", "%", "&", "/", "-lrb-", "-rrb-"};
  return from_words(kWords);
}

Stoplist Stoplist::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword list '" + path + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line.erase(0, start);
    if (line.front() == '#') continue;
    words.push_back(line);
  }
  return from_words(words);
}

Stoplist Stoplist::from_words(const std::vector<std::string>& words) {
  Stoplist s;
  for (const auto& w : words) s.words_.insert(fold_case(w));
  return s;
}

// ---------------------------------------------------------------------------
// Frequency lists

namespace {

bool is_target_form(const Instance& inst, std::size_t pos,
                    const std::string& folded_word) {
  const auto& f = inst.tokens[pos].folded;
  return pos == inst.target_index || f == folded_word || f == inst.target().folded;
}

bool is_content(const Instance& inst, std::size_t pos,
                const std::string& folded_word, const Stoplist& stop) {
  return !stop.contains(inst.tokens[pos].folded) && !is_target_form(inst, pos, folded_word);
}

std::vector<std::string> top_k(const std::map<std::string, std::size_t>& counts, std::size_t k) {
  std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
  // map iteration is already lexicographic, so a stable sort keeps ties in order
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < items.size() && i < k; ++i) out.push_back(items[i].first);
  return out;
}

std::optional<std::size_t> offset_position(const Instance& inst, int offset) {
  const auto p = static_cast<long long>(inst.target_index) + offset;
  if (p < 0 || p >= static_cast<long long>(inst.tokens.size())) return std::nullopt;
  return static_cast<std::size_t>(p);
}

}  // namespace

std::vector<std::string> top_content_words(const WordSample& sample, std::size_t k, const Stoplist& stop) {
  if (k == 0) throw Error("top_content_words: k must be at least 1");
  const std::string word = fold_case(sample.word);
  std::map<std::string, std::size_t> counts;
  for (const auto& inst : sample.instances) {
    for (std::size_t p = 0; p < inst.tokens.size(); ++p) {
      if (is_content(inst, p, word, stop)) ++counts[inst.tokens[p].folded];
    }
  }
  return top_k(counts, k);
}

std::vector<std::string> top_positional_words(const WordSample& sample, int offset, bool content_only,
                                              std::size_t k, const Stoplist& stop) {
  if (offset == 0) throw Error("top_positional_words: offset must be non-zero");
  if (k == 0) throw Error("top_positional_words: k must be at least 1");
  const std::string word = fold_case(sample.word);
  std::map<std::string, std::size_t> counts;
  for (const auto& inst : sample.instances) {
    auto p = offset_position(inst, offset);
    if (!p) continue;
    if (content_only && !is_content(inst, *p, word, stop)) continue;
    ++counts[inst.tokens[*p].folded];
  }
  return top_k(counts, k);
}

// ---------------------------------------------------------------------------
// Schema

namespace {

FeatureDescriptor morph_feature(const WordSample& sample) {
  std::set<std::string> seen;
  for (const auto& inst : sample.instances) seen.insert(inst.morph);
  FeatureDescriptor d;
  d.name = "M";
  d.kind = FeatureKind::morphology;
  d.values.assign(seen.begin(), seen.end());
  return d;
}

FeatureDescriptor pos_feature(int offset) {
  FeatureDescriptor d;
  d.name = (offset < 0 ? "PL" : "PR") + std::to_string(std::abs(offset));
  d.kind = FeatureKind::pos;
  d.offset = offset;
  for (Pos p : {Pos::noun, Pos::verb, Pos::adjective, Pos::adverb, Pos::other})
    d.values.emplace_back(to_string(p));
  return d;
}

FeatureDescriptor cooccurrence_feature(std::size_t rank, const std::vector<std::string>& top) {
  FeatureDescriptor d;
  d.name = "C" + std::to_string(rank + 1);
  d.kind = FeatureKind::cooccurrence;
  if (rank < top.size()) d.word = top[rank];
  d.values = {"0", "1"};
  return d;
}

FeatureDescriptor collocation_feature(const WordSample& sample, int offset, bool content_only,
                                      const Stoplist& stop) {
  FeatureDescriptor d;
  const char* side = offset < 0 ? "L" : "R";
  d.name = std::string(content_only ? "C" : "U") + side + std::to_string(std::abs(offset));
  d.kind = FeatureKind::collocation;
  d.offset = offset;
  d.content_only = content_only;
  d.values = top_positional_words(sample, offset, content_only, kCollocationWords, stop);
  // pad so the alphabet always has 19 word slots
  for (std::size_t i = d.values.size(); i < kCollocationWords; ++i)
    d.values.push_back("(unused" + std::to_string(i + 1) + ")");
  d.values.emplace_back(kNoneValue);
  d.values.emplace_back(kNullValue);
  return d;
}

}  // namespace

FeatureSchema build_schema(const WordSample& sample, FeatureSetId set, const Stoplist& stop) {
  if (sample.instances.empty()) throw Error("build_schema: empty sample");
  FeatureSchema schema;
  auto& fs = schema.features;
  if (sample.category != Category::adjective) fs.push_back(morph_feature(sample));
  const bool with_pos = set == FeatureSetId::A || set == FeatureSetId::C;
  if (with_pos) {
    for (int off : {-2, -1, 1, 2}) fs.push_back(pos_feature(off));
  }
  switch (set) {
    case FeatureSetId::A: {
      const auto top = top_content_words(sample, kCooccurrenceWords, stop);
      for (std::size_t r = 0; r < kCooccurrenceWords; ++r) fs.push_back(cooccurrence_feature(r, top));
      break;
    }
    case FeatureSetId::B:
      for (int off : {-2, -1, 1, 2}) fs.push_back(collocation_feature(sample, off, false, stop));
      break;
    case FeatureSetId::C:
      for (int off : {-1, 1}) fs.push_back(collocation_feature(sample, off, true, stop));
      break;
  }
  return schema;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

std::uint32_t extract_value(const Instance& inst, const FeatureDescriptor& d,
                            const std::string& folded_word, const Stoplist& stop) {
  switch (d.kind) {
    case FeatureKind::morphology: {
      auto v = d.value_index(inst.morph);
      if (!v) throw Error("morph value '" + inst.morph + "' missing from schema");
      return *v;
    }
    case FeatureKind::pos: {
      auto p = offset_position(inst, d.offset);
      return static_cast<std::uint32_t>(p ? inst.tokens[*p].pos : Pos::other);
    }
    case FeatureKind::cooccurrence: {
      if (d.word.empty()) return 0;
      for (std::size_t p = 0; p < inst.tokens.size(); ++p) {
        if (p != inst.target_index && inst.tokens[p].folded == d.word) return 1;
      }
      return 0;
    }
    case FeatureKind::collocation: {
      const auto none = static_cast<std::uint32_t>(d.values.size() - 2);
      const auto null = static_cast<std::uint32_t>(d.values.size() - 1);
      auto p = offset_position(inst, d.offset);
      if (!p) return null;
      if (d.content_only && !is_content(inst, *p, folded_word, stop)) return none;
      const auto& w = inst.tokens[*p].folded;
      for (std::size_t i = 0; i < kCollocationWords && i < d.values.size() - 2; ++i) {
        if (d.values[i] == w) return static_cast<std::uint32_t>(i);
      }
      return none;
    }
  }
  return 0;
}

}  // namespace

FeatureMatrix extract(const WordSample& sample, const FeatureSchema& schema, const Stoplist& stop) {
  FeatureMatrix m(schema, sample.instances.size());
  const std::string folded_word = fold_case(sample.word);
  const auto n = static_cast<std::ptrdiff_t>(sample.instances.size());
  const std::size_t q = schema.size();
  std::string failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto& inst = sample.instances[static_cast<std::size_t>(r)];
    try {
      for (std::size_t c = 0; c < q; ++c)
        m(static_cast<std::size_t>(r), c) = extract_value(inst, schema.features[c], folded_word, stop);
    } catch (const std::exception& e) {
#pragma omp critical(wsd_extract_error)
      if (failure.empty()) failure = e.what();
    }
  }
  if (!failure.empty()) throw Error(failure);
  return m;
}

std::uint64_t dimensionality(FeatureSetId set, Category category) {
  std::uint64_t morph = 1;
  if (category == Category::noun) morph = 2;
  if (category == Category::verb) morph = 7;
  const std::uint64_t pos = kPosCount;
  const std::uint64_t colloc = kCollocationWords + 2;
  switch (set) {
    case FeatureSetId::A: return morph * pos * pos * pos * pos * 2 * 2 * 2;
    case FeatureSetId::B: return morph * colloc * colloc * colloc * colloc;
    case FeatureSetId::C: return morph * pos * pos * pos * pos * colloc * colloc;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Table I/O

void write_feature_table(std::ostream& out, const FeatureMatrix& m) {
  const auto& fs = m.schema().features;
  for (std::size_t c = 0; c < fs.size(); ++c) out << (c ? "\t" : "") << fs[c].name;
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < fs.size(); ++c) out << (c ? "\t" : "") << fs[c].values[m(r, c)];
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, '\t')) out.push_back(cell);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

FeatureKind kind_from_name(const std::string& name) {
  if (name == "M") return FeatureKind::morphology;
  if (name.rfind("PL", 0) == 0 || name.rfind("PR", 0) == 0) return FeatureKind::pos;
  if (name.size() >= 2 && name[0] == 'C' && std::isdigit(static_cast<unsigned char>(name[1])))
    return FeatureKind::cooccurrence;
  return FeatureKind::collocation;
}

}  // namespace

FeatureMatrix read_feature_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("feature table: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  FeatureSchema schema;
  for (auto& name : split_tabs(line)) {
    FeatureDescriptor d;
    d.kind = kind_from_name(name);
    d.name = std::move(name);
    schema.features.push_back(std::move(d));
  }
  const std::size_t q = schema.size();
  std::vector<std::unordered_map<std::string, std::uint32_t>> lookup(q);
  std::vector<std::uint32_t> cells;
  std::size_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = split_tabs(line);
    if (row.size() != q)
      throw Error("feature table line " + std::to_string(lineno) + ": expected " + std::to_string(q) +
                  " columns, found " + std::to_string(row.size()));
    for (std::size_t c = 0; c < q; ++c) {
      auto [it, inserted] =
          lookup[c].try_emplace(row[c], static_cast<std::uint32_t>(schema.features[c].values.size()));
      if (inserted) schema.features[c].values.push_back(row[c]);
      cells.push_back(it->second);
    }
    ++rows;
  }
  FeatureMatrix m(std::move(schema), rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < q; ++c) m(r, c) = cells[r * q + c];
  return m;
}

}  // namespace wsd
