#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace docgroup {

struct TokenizerConfig {
  bool lowercase = true;
  std::size_t min_token_len = 2;
  std::unordered_set<std::string> stopwords;

  // lowercase, split on non-alphanumerics, min length 2, builtin English
  // stopword list.
  static TokenizerConfig defaults();
};

std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& config);

struct Document {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::string group_key;
  std::optional<int> year;
  std::optional<double> amount;

  // Documents empty after normalization stay in the corpus but are skipped
  // by the topic model.
  bool modelable() const { return !tokens.empty(); }
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<std::string> vocabulary;  // distinct terms, first-seen order
  std::unordered_map<std::string, int> vocab_index;
  std::unordered_map<std::string, std::size_t> doc_position;

  std::size_t size() const { return documents.size(); }
  bool contains(const std::string& doc_id) const { return doc_position.count(doc_id) > 0; }
  const Document& by_id(const std::string& doc_id) const;
  std::vector<std::size_t> modelable_indices() const;
};

// Document groups: a partition of the corpus keyed by group id.
struct GroupPartition {
  std::map<std::string, std::set<std::string>> groups;
};

// Comparison criteria: a family of document subsets keyed by criterion id.
// is_partition records whether the subsets are disjoint and cover the
// universe they were built over.
struct CriteriaFamily {
  std::map<std::string, std::set<std::string>> criteria;
  bool is_partition = false;
};

enum class GroupKey { group, year };

// Reads JSON-lines records {"id","text","group"[,"year","amount"]} and
// tokenizes text per config. Throws on duplicate ids, missing required
// fields (with line numbers), and empty input.
Corpus load_corpus(std::istream& in, const TokenizerConfig& config);

GroupPartition assign_groups(const Corpus& corpus, GroupKey key);

CriteriaFamily criteria_from_labels(const Corpus& corpus,
                                    const std::map<std::string, std::string>& labels);

// Two-column CSV "doc_id,criterion_id" with header.
std::map<std::string, std::string> load_labels_csv(std::istream& in);

}  // namespace docgroup
