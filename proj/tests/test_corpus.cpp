#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "wsd/corpus.hpp"

using namespace wsd;
using testutil::data_path;

namespace {

WordSample parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const CorpusError& e) {
    return e.line();
  }
  return 0;
}

std::string error_text(const std::string& text) {
  try {
    parse(text);
  } catch (const CorpusError& e) {
    return e.what();
  }
  return {};
}

const char* kHeader = R"({"word":"drug","category":"noun","senses":["medicine","narcotic"]})"
                      "\n";

}  // namespace

TEST_CASE("a header plus one instance loads with N=1 and K=2") {
  const auto s = parse(std::string(kHeader) +
                       R"({"tokens":[["the","other"],["drug","noun"]],"target":1,"morph":"sg","sense":"medicine"})");
  CHECK(s.word == "drug");
  CHECK(s.category == Category::noun);
  CHECK(s.size() == 1);
  CHECK(s.sense_inventory.size() == 2);
  CHECK(s.instances[0].target().text == "drug");
}

TEST_CASE("target index equal to sentence length is rejected with its line number") {
  const std::string text = std::string(kHeader) +
                           R"({"tokens":[["the","other"],["drug","noun"]],"target":2,"morph":"sg"})";
  CHECK(error_line(text) == 2);
  CHECK(error_text(text).find("target index out of range") != std::string::npos);
}

TEST_CASE("malformed records report the offending line") {
  const std::string ok = R"({"tokens":[["drug","noun"]],"target":0,"morph":"sg"})";
  CHECK(error_line(std::string(kHeader) + ok + "\n" + ok + "\n{not json\n") == 4);
  CHECK(error_line(std::string(kHeader) + R"({"tokens":[["drug","NN"]],"target":0,"morph":"sg"})") == 2);
  CHECK(error_text(std::string(kHeader) + R"({"tokens":[["drug","NN"]],"target":0,"morph":"sg"})")
            .find("unknown POS tag") != std::string::npos);
  CHECK(error_text(std::string(kHeader) + R"({"tokens":[["drug","noun"]],"target":0,"morph":"sg","sense":"poison"})")
            .find("not in declared inventory") != std::string::npos);
  CHECK(error_line(std::string(kHeader) + R"({"tokens":[["drug","noun"]],"target":0})") == 2);
  CHECK(error_line(std::string(kHeader) + R"({"tokens":[],"target":0,"morph":"sg"})") == 2);
  CHECK(error_line(R"({"word":"drug","category":"noun","senses":["medicine"]})") == 1);
  CHECK(error_line(R"({"word":"drug","category":"noun","senses":["a","a"]})") == 1);
  CHECK(error_line(R"({"word":"drug","category":"preposition","senses":["a","b"]})") == 1);
  CHECK_THROWS_AS(parse(""), CorpusError);
}

TEST_CASE("adjectives may omit the morph tag") {
  const auto s = parse(R"({"word":"hard","category":"adjective","senses":["difficult","firm"]})"
                       "\n"
                       R"({"tokens":[["hard","adjective"],["work","noun"]],"target":0})");
  CHECK(s.instances[0].morph.empty());
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
  const auto s = parse(std::string(kHeader) + "\r\n\n" +
                       R"({"tokens":[["Drug","noun"]],"target":0,"morph":"sg"})" + "\r\n");
  REQUIRE(s.size() == 1);
  CHECK(s.instances[0].tokens[0].folded == "drug");
  CHECK(s.instances[0].tokens[0].text == "Drug");
  CHECK_FALSE(s.instances[0].gold_sense.has_value());
}

TEST_CASE("the fixture file round-trips byte for byte") {
  const auto original = testutil::slurp(data_path("mini8.jsonl"));
  const auto s = load_corpus(data_path("mini8.jsonl"));
  CHECK(s.size() == 8);
  CHECK(serialize_corpus(s) == original);
  CHECK(serialize_corpus(parse(serialize_corpus(s))) == original);
}

TEST_CASE("randomly generated samples round-trip through serialization") {
  std::mt19937_64 g(11);
  const std::vector<std::string> vocab = {"a", "Bank", "river", "\"quoted\"", "tab\there", "caf\xc3\xa9", "x\\y", "."};
  for (int rep = 0; rep < 50; ++rep) {
    WordSample s;
    s.word = "bank";
    s.category = static_cast<Category>(g() % 3);
    s.sense_inventory = {"money", "shore", "tilt"};
    const std::size_t n = g() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      Instance inst;
      const std::size_t len = 1 + g() % 5;
      for (std::size_t t = 0; t < len; ++t) {
        const auto& w = vocab[g() % vocab.size()];
        inst.tokens.push_back({w, fold_case(w), static_cast<Pos>(g() % kPosCount)});
      }
      inst.target_index = g() % len;
      inst.morph = s.category == Category::adjective ? "" : (g() % 2 ? "sg" : "pl");
      if (g() % 3) inst.gold_sense = s.sense_inventory[g() % 3];
      s.instances.push_back(inst);
    }
    const auto text = serialize_corpus(s);
    const auto back = parse(text);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(back.instances[i].target_index == s.instances[i].target_index);
      CHECK(back.instances[i].gold_sense == s.instances[i].gold_sense);
      for (std::size_t t = 0; t < s.instances[i].tokens.size(); ++t) {
        CHECK(back.instances[i].tokens[t].text == s.instances[i].tokens[t].text);
        CHECK(back.instances[i].tokens[t].pos == s.instances[i].tokens[t].pos);
      }
    }
    CHECK(serialize_corpus(back) == text);
  }
}

TEST_CASE("sense distribution") {
  using testutil::sentence;
  auto make = [](std::size_t a, std::size_t b) {
    std::vector<Instance> insts;
    for (std::size_t i = 0; i < a; ++i) insts.push_back(sentence("chief", 0, "sg", "leader"));
    for (std::size_t i = 0; i < b; ++i) insts.push_back(sentence("chief", 0, "sg", "main"));
    return testutil::sample("chief", Category::noun, {"leader", "main"}, insts);
  };

  SUBCASE("86/14 split") {
    const auto d = sense_distribution(make(86, 14));
    CHECK(d[0].first == "leader");
    CHECK(d[0].second == doctest::Approx(0.86));
    CHECK(d[1].second == doctest::Approx(0.14));
  }
  SUBCASE("one sense only") {
    const auto d = sense_distribution(make(5, 0));
    CHECK(d[0].second == 1.0);
    CHECK(d[1].second == 0.0);
  }
  SUBCASE("447 and 788") {
    const auto d = sense_distribution(make(447, 788));
    CHECK(d[0].second == doctest::Approx(447.0 / 1235));
    CHECK(d[1].second == doctest::Approx(788.0 / 1235));
    CHECK(d[0].second + d[1].second == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("untagged instances are an error") {
    auto s = make(2, 2);
    s.instances[1].gold_sense.reset();
    CHECK_THROWS_AS(sense_distribution(s), Error);
  }
}

TEST_CASE("case folding is ASCII only") {
  CHECK(fold_case("ThE CAF\xc3\x89") == "the caf\xc3\x89");
  CHECK(parse_pos("noun") == Pos::noun);
  CHECK_FALSE(parse_pos("NN").has_value());
  CHECK(parse_category("verb") == Category::verb);
}
