#include "wsd/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wsd {

using ordered_json = nlohmann::ordered_json;

CorpusError::CorpusError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string_view to_string(Pos p) {
  switch (p) {
    case Pos::noun: return "noun";
    case Pos::verb: return "verb";
    case Pos::adjective: return "adjective";
    case Pos::adverb: return "adverb";
    case Pos::other: return "other";
  }
  return "other";
}

std::optional<Pos> parse_pos(std::string_view s) {
  for (Pos p : {Pos::noun, Pos::verb, Pos::adjective, Pos::adverb, Pos::other}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::noun: return "noun";
    case Category::verb: return "verb";
    case Category::adjective: return "adjective";
  }
  return "noun";
}

std::optional<Category> parse_category(std::string_view s) {
  for (Category c : {Category::noun, Category::verb, Category::adjective}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::optional<std::size_t> WordSample::sense_index(std::string_view label) const {
  auto it = std::find(sense_inventory.begin(), sense_inventory.end(), label);
  if (it == sense_inventory.end()) return std::nullopt;
  return static_cast<std::size_t>(it - sense_inventory.begin());
}

namespace {

const ordered_json& require(const ordered_json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw CorpusError(line, std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const ordered_json& obj, const char* key, std::size_t line) {
  const auto& v = require(obj, key, line);
  if (!v.is_string()) throw CorpusError(line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

void parse_header(const ordered_json& h, WordSample& out, std::size_t line) {
  out.word = require_string(h, "word", line);
  if (out.word.empty()) throw CorpusError(line, "empty word");
  const std::string cat = require_string(h, "category", line);
  auto c = parse_category(cat);
  if (!c) throw CorpusError(line, "unknown category '" + cat + "'");
  out.category = *c;
  const auto& senses = require(h, "senses", line);
  if (!senses.is_array()) throw CorpusError(line, "field 'senses' must be an array");
  for (const auto& s : senses) {
    if (!s.is_string() || s.get<std::string>().empty())
      throw CorpusError(line, "sense labels must be non-empty strings");
    const auto label = s.get<std::string>();
    if (out.sense_index(label)) throw CorpusError(line, "duplicate sense '" + label + "'");
    out.sense_inventory.push_back(label);
  }
  if (out.sense_inventory.size() < 2) throw CorpusError(line, "at least two senses are required");
}

Instance parse_instance(const ordered_json& r, const WordSample& sample, std::size_t line) {
  Instance inst;
  const auto& toks = require(r, "tokens", line);
  if (!toks.is_array() || toks.empty()) throw CorpusError(line, "field 'tokens' must be a non-empty array");
  for (const auto& t : toks) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_string())
      throw CorpusError(line, "each token must be a [text, pos] pair");
    Token tok;
    tok.text = t[0].get<std::string>();
    if (tok.text.empty()) throw CorpusError(line, "empty token text");
    const auto pos = t[1].get<std::string>();
    auto p = parse_pos(pos);
    if (!p) throw CorpusError(line, "unknown POS tag '" + pos + "'");
    tok.pos = *p;
    tok.folded = fold_case(tok.text);
    inst.tokens.push_back(std::move(tok));
  }
  const auto& target = require(r, "target", line);
  if (!target.is_number_integer()) throw CorpusError(line, "field 'target' must be an integer");
  const auto t = target.get<long long>();
  if (t < 0 || static_cast<std::size_t>(t) >= inst.tokens.size())
    throw CorpusError(line, "target index out of range");
  inst.target_index = static_cast<std::size_t>(t);
  if (auto it = r.find("morph"); it != r.end()) {
    if (!it->is_string()) throw CorpusError(line, "field 'morph' must be a string");
    inst.morph = it->get<std::string>();
  }
  if (inst.morph.empty() && sample.category != Category::adjective)
    throw CorpusError(line, "morph tag required for noun and verb samples");
  if (auto it = r.find("sense"); it != r.end()) {
    if (!it->is_string()) throw CorpusError(line, "field 'sense' must be a string");
    auto label = it->get<std::string>();
    if (!sample.sense_index(label)) throw CorpusError(line, "sense '" + label + "' not in declared inventory");
    inst.gold_sense = std::move(label);
  }
  return inst;
}

}  // namespace

WordSample parse_corpus(std::istream& in) {
  WordSample sample;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    ordered_json rec;
    try {
      rec = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusError(line, std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object()) throw CorpusError(line, "record must be an object");
    if (!have_header) {
      parse_header(rec, sample, line);
      have_header = true;
    } else {
      sample.instances.push_back(parse_instance(rec, sample, line));
    }
  }
  if (!have_header) throw CorpusError(line, "missing header record");
  return sample;
}

WordSample load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return parse_corpus(in);
}

std::string serialize_corpus(const WordSample& sample) {
  std::string out;
  ordered_json header;
  header["word"] = sample.word;
  header["category"] = std::string(to_string(sample.category));
  header["senses"] = sample.sense_inventory;
  out += header.dump();
  out += '\n';
  for (const auto& inst : sample.instances) {
    ordered_json rec;
    auto toks = ordered_json::array();
    for (const auto& t : inst.tokens) toks.push_back({t.text, std::string(to_string(t.pos))});
    rec["tokens"] = std::move(toks);
    rec["target"] = inst.target_index;
    rec["morph"] = inst.morph;
    if (inst.gold_sense) rec["sense"] = *inst.gold_sense;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::size_t> sense_counts(const WordSample& sample) {
  std::vector<std::size_t> counts(sample.sense_inventory.size(), 0);
  for (std::size_t i = 0; i < sample.instances.size(); ++i) {
    const auto& g = sample.instances[i].gold_sense;
    if (!g) throw Error("instance " + std::to_string(i) + " has no gold sense");
    ++counts[*sample.sense_index(*g)];
  }
  return counts;
}

std::vector<std::pair<std::string, double>> sense_distribution(const WordSample& sample) {
  const auto counts = sense_counts(sample);
  if (sample.instances.empty()) throw Error("sense distribution of an empty sample");
  const double n = static_cast<double>(sample.instances.size());
  std::vector<std::pair<std::string, double>> dist;
  for (std::size_t s = 0; s < counts.size(); ++s)
    dist.emplace_back(sample.sense_inventory[s], static_cast<double>(counts[s]) / n);
  return dist;
}

}  // namespace wsd
