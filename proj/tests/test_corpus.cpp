#include <sstream>

#include "docgroup/corpus.hpp"
#include "docgroup/util.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace docgroup;

namespace {

Corpus load(const std::string& jsonl) { return testutil::corpus_from_jsonl(jsonl); }

const char* kToy =
    "{\"id\":\"d1\",\"text\":\"Language and languages.\",\"group\":\"A\",\"year\":1990}\n"
    "{\"id\":\"d2\",\"text\":\"network connection internet\",\"group\":\"A\",\"year\":1990}\n"
    "{\"id\":\"d3\",\"text\":\"ecology and rivers\",\"group\":\"B\",\"year\":2002,\"amount\":2.5}\n";

}  // namespace

TEST_CASE("tokenizer lowercases, strips punctuation, drops stopwords and short tokens") {
  const auto config = TokenizerConfig::defaults();
  CHECK(tokenize("Language and languages.", config) ==
        std::vector<std::string>{"language", "languages"});
  CHECK(tokenize("A a I", config).empty());
  CHECK(tokenize("x2, y-z!", config) == std::vector<std::string>{"x2"});
  CHECK(tokenize("", config).empty());
}

TEST_CASE("load_corpus builds documents and a first-seen vocabulary") {
  const Corpus corpus = load(kToy);
  REQUIRE(corpus.size() == 3);
  CHECK(corpus.documents[0].doc_id == "d1");
  CHECK(corpus.documents[0].tokens == std::vector<std::string>{"language", "languages"});
  CHECK(corpus.documents[0].group_key == "A");
  CHECK(corpus.documents[0].year == 1990);
  CHECK_FALSE(corpus.documents[0].amount.has_value());
  CHECK(corpus.documents[2].amount == 2.5);
  CHECK(corpus.vocabulary == std::vector<std::string>{"language", "languages", "network",
                                                      "connection", "internet", "ecology",
                                                      "rivers"});
  CHECK(corpus.vocab_index.at("network") == 2);
}

TEST_CASE("load_corpus rejects malformed input") {
  CHECK_THROWS_WITH_AS(load("{\"id\":\"d1\",\"text\":\"x y\",\"group\":\"A\"}\n"
                            "{\"id\":\"d1\",\"text\":\"z w\",\"group\":\"B\"}\n"),
                       doctest::Contains("duplicate doc_id 'd1'"), std::runtime_error);
  CHECK_THROWS_WITH_AS(load(""), doctest::Contains("empty corpus"), std::runtime_error);
  CHECK_THROWS_WITH_AS(load("{\"id\":\"d1\",\"group\":\"A\"}\n"), doctest::Contains("line 1"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(load("{\"id\":\"d1\",\"text\":\"x\",\"group\":\"A\"}\nnot json\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      load("{\"id\":\"d1\",\"text\":\"x\",\"group\":\"A\",\"amount\":-3}\n"),
      doctest::Contains("negative amount"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      load("{\"id\":\"d1\",\"text\":\"x\",\"group\":\"A\",\"year\":1990.5}\n"),
      doctest::Contains("integer"), std::runtime_error);
}

TEST_CASE("load_corpus is deterministic") {
  const Corpus a = load(kToy);
  const Corpus b = load(kToy);
  CHECK(a.vocabulary == b.vocabulary);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.documents[i].doc_id == b.documents[i].doc_id);
    CHECK(a.documents[i].tokens == b.documents[i].tokens);
  }
}

TEST_CASE("documents empty after normalization are kept but not modelable") {
  const Corpus corpus = load(
      "{\"id\":\"d1\",\"text\":\"language models\",\"group\":\"A\"}\n"
      "{\"id\":\"d2\",\"text\":\"and the of\",\"group\":\"A\"}\n");
  CHECK(corpus.size() == 2);
  CHECK(corpus.modelable_indices() == std::vector<std::size_t>{0});
}

TEST_CASE("assign_groups partitions by group key") {
  const Corpus corpus = load(kToy);
  const GroupPartition partition = assign_groups(corpus, GroupKey::group);
  REQUIRE(partition.groups.size() == 2);
  CHECK(partition.groups.at("A") == std::set<std::string>{"d1", "d2"});
  CHECK(partition.groups.at("B") == std::set<std::string>{"d3"});
}

TEST_CASE("assign_groups partitions by year") {
  const Corpus corpus = load(kToy);
  const GroupPartition partition = assign_groups(corpus, GroupKey::year);
  REQUIRE(partition.groups.size() == 2);
  CHECK(partition.groups.at("1990").size() == 2);
  CHECK(partition.groups.at("2002").size() == 1);
}

TEST_CASE("assign_groups reports the document missing the key field") {
  const Corpus corpus = load(
      "{\"id\":\"d1\",\"text\":\"alpha beta\",\"group\":\"A\",\"year\":1990}\n"
      "{\"id\":\"d2\",\"text\":\"gamma delta\",\"group\":\"A\"}\n");
  CHECK_THROWS_WITH_AS(assign_groups(corpus, GroupKey::year), doctest::Contains("'d2'"),
                       std::runtime_error);
}

TEST_CASE("assign_groups output is a partition of random corpora") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_index(40));
    std::ostringstream jsonl;
    for (int i = 0; i < n; ++i) {
      jsonl << "{\"id\":\"d" << i << "\",\"text\":\"alpha beta\",\"group\":\"g"
            << rng.next_index(5) << "\"}\n";
    }
    const Corpus corpus = load(jsonl.str());
    const GroupPartition partition = assign_groups(corpus, GroupKey::group);
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto& [gid, docs] : partition.groups) {
      CHECK_FALSE(docs.empty());
      total += docs.size();
      seen.insert(docs.begin(), docs.end());
    }
    CHECK(total == corpus.size());
    CHECK(seen.size() == corpus.size());
  }
}

TEST_CASE("criteria_from_labels builds families and detects partitions") {
  const Corpus corpus = load(kToy);

  SUBCASE("full cover is a partition") {
    const CriteriaFamily family =
        criteria_from_labels(corpus, {{"d1", "t1"}, {"d2", "t1"}, {"d3", "t2"}});
    CHECK(family.is_partition);
    CHECK(family.criteria.at("t1") == std::set<std::string>{"d1", "d2"});
    CHECK(family.criteria.at("t2") == std::set<std::string>{"d3"});
  }
  SUBCASE("partial cover is not a partition") {
    const CriteriaFamily family = criteria_from_labels(corpus, {{"d1", "t1"}});
    CHECK_FALSE(family.is_partition);
  }
  SUBCASE("unknown doc is rejected") {
    CHECK_THROWS_WITH_AS(criteria_from_labels(corpus, {{"d9", "t1"}}),
                         doctest::Contains("unknown doc_id 'd9'"), std::runtime_error);
  }
}

TEST_CASE("labels CSV loader") {
  std::istringstream in("doc_id,criterion_id\nd1,t1\nd2,t2\n");
  const auto labels = load_labels_csv(in);
  CHECK(labels == std::map<std::string, std::string>{{"d1", "t1"}, {"d2", "t2"}});

  std::istringstream bad_header("docid,criterion\nd1,t1\n");
  CHECK_THROWS_AS(load_labels_csv(bad_header), std::runtime_error);
  std::istringstream dup("doc_id,criterion_id\nd1,t1\nd1,t2\n");
  CHECK_THROWS_WITH_AS(load_labels_csv(dup), doctest::Contains("duplicate"), std::runtime_error);
}
