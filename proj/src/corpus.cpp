#include "docgroup/corpus.hpp"

#include <cctype>
#include <iostream>
#include <istream>
#include <stdexcept>

#include "docgroup/util.hpp"
#include "json.hpp"

namespace docgroup {

namespace {

// Common English stopwords, small enough to keep runs fast and reproducible.
const char* const kStopwords[] = {
    "a",       "about",   "above",  "after",   "again",   "against", "all",
    "am",      "an",      "and",    "any",     "are",     "as",      "at",
    "be",      "because", "been",   "before",  "being",   "below",   "between",
    "both",    "but",     "by",     "can",     "cannot",  "could",   "did",
    "do",      "does",    "doing",  "down",    "during",  "each",    "few",
    "for",     "from",    "further", "had",    "has",     "have",    "having",
    "he",      "her",     "here",   "hers",    "herself", "him",     "himself",
    "his",     "how",     "i",      "if",      "in",      "into",    "is",
    "it",      "its",     "itself", "just",    "me",      "more",    "most",
    "my",      "myself",  "no",     "nor",     "not",     "now",     "of",
    "off",     "on",      "once",   "only",    "or",      "other",   "our",
    "ours",    "ourselves", "out",  "over",    "own",     "same",    "she",
    "should",  "so",      "some",   "such",    "than",    "that",    "the",
    "their",   "theirs",  "them",   "themselves", "then", "there",   "these",
    "they",    "this",    "those",  "through", "to",      "too",     "under",
    "until",   "up",      "very",   "was",     "we",      "were",    "what",
    "when",    "where",   "which",  "while",   "who",     "whom",    "why",
    "will",    "with",    "would",  "you",     "your",    "yours",   "yourself",
    "yourselves",
};

}  // namespace

TokenizerConfig TokenizerConfig::defaults() {
  TokenizerConfig config;
  for (const char* w : kStopwords) config.stopwords.insert(w);
  return config;
}

std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= config.min_token_len && !config.stopwords.count(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (unsigned char ch : text) {
    if (std::isalnum(ch)) {
      current.push_back(config.lowercase ? static_cast<char>(std::tolower(ch)) : static_cast<char>(ch));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

const Document& Corpus::by_id(const std::string& doc_id) const {
  auto it = doc_position.find(doc_id);
  if (it == doc_position.end()) {
    throw std::runtime_error("unknown doc_id '" + doc_id + "'");
  }
  return documents[it->second];
}

std::vector<std::size_t> Corpus::modelable_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (documents[i].modelable()) out.push_back(i);
  }
  return out;
}

Corpus load_corpus(std::istream& in, const TokenizerConfig& config) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!record.is_object()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": record is not a JSON object");
    }
    for (const char* field : {"id", "text", "group"}) {
      if (!record.contains(field) || !record[field].is_string()) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": record missing required string field '" + std::string(field) + "'");
      }
    }

    Document doc;
    doc.doc_id = record["id"].get<std::string>();
    if (doc.doc_id.empty()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": empty doc id");
    }
    if (corpus.contains(doc.doc_id)) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate doc_id '" +
                               doc.doc_id + "'");
    }
    doc.tokens = tokenize(record["text"].get<std::string>(), config);
    doc.group_key = record["group"].get<std::string>();
    if (record.contains("year") && !record["year"].is_null()) {
      if (!record["year"].is_number_integer()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": 'year' must be an integer");
      }
      doc.year = record["year"].get<int>();
    }
    if (record.contains("amount") && !record["amount"].is_null()) {
      if (!record["amount"].is_number()) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": 'amount' must be a number");
      }
      double amount = record["amount"].get<double>();
      if (amount < 0) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": negative amount for doc '" +
                                 doc.doc_id + "'");
      }
      doc.amount = amount;
    }

    for (const std::string& token : doc.tokens) {
      if (!corpus.vocab_index.count(token)) {
        corpus.vocab_index.emplace(token, static_cast<int>(corpus.vocabulary.size()));
        corpus.vocabulary.push_back(token);
      }
    }
    corpus.doc_position.emplace(doc.doc_id, corpus.documents.size());
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty()) {
    throw std::runtime_error("empty corpus: input contains no records");
  }
  for (const Document& doc : corpus.documents) {
    if (!doc.modelable()) {
      std::cerr << "warning: document '" << doc.doc_id
                << "' is empty after normalization; it is kept in the corpus but excluded from "
                   "topic modeling\n";
    }
  }
  return corpus;
}

GroupPartition assign_groups(const Corpus& corpus, GroupKey key) {
  GroupPartition partition;
  for (const Document& doc : corpus.documents) {
    std::string group_id;
    if (key == GroupKey::group) {
      if (doc.group_key.empty()) {
        throw std::runtime_error("document '" + doc.doc_id + "' has no group value");
      }
      group_id = doc.group_key;
    } else {
      if (!doc.year.has_value()) {
        throw std::runtime_error("document '" + doc.doc_id + "' has no year; cannot group by year");
      }
      group_id = std::to_string(*doc.year);
    }
    partition.groups[group_id].insert(doc.doc_id);
  }
  return partition;
}

CriteriaFamily criteria_from_labels(const Corpus& corpus,
                                    const std::map<std::string, std::string>& labels) {
  CriteriaFamily family;
  for (const auto& [doc_id, criterion_id] : labels) {
    if (!corpus.contains(doc_id)) {
      throw std::runtime_error("label references unknown doc_id '" + doc_id + "'");
    }
    family.criteria[criterion_id].insert(doc_id);
  }
  // labels form a function doc_id -> criterion, so subsets are disjoint;
  // partition holds iff they also cover the corpus.
  family.is_partition = labels.size() == corpus.size();
  return family;
}

std::map<std::string, std::string> load_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("labels file is empty");
  }
  line = strip_cr(line);
  if (split(line, ',') != std::vector<std::string>{"doc_id", "criterion_id"}) {
    throw std::runtime_error("labels file must start with header 'doc_id,criterion_id'");
  }
  std::map<std::string, std::string> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw std::runtime_error("labels line " + std::to_string(line_no) +
                               ": expected 'doc_id,criterion_id'");
    }
    if (labels.count(fields[0])) {
      throw std::runtime_error("labels line " + std::to_string(line_no) + ": duplicate doc_id '" +
                               fields[0] + "'");
    }
    labels.emplace(fields[0], fields[1]);
  }
  return labels;
}

}  // namespace docgroup
