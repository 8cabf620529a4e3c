#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "docgroup/corpus.hpp"

namespace docgroup {

struct TopicModel {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> doc_ids;     // modelable documents, corpus order
  std::vector<std::string> vocabulary;  // empty when loaded from a theta CSV
  std::vector<std::vector<double>> theta;       // |doc_ids| x k, row-stochastic
  std::vector<std::vector<double>> topic_word;  // k x |V|, row-stochastic
};

struct TopicLabel {
  int topic_id = 0;  // 1-based
  std::vector<std::pair<std::string, double>> top_words;
};

inline double default_alpha(int k) { return 5.0 / k; }
inline constexpr double kDefaultBeta = 0.01;
inline constexpr int kDefaultIterations = 200;

// Single-chain collapsed Gibbs sampling over token-topic assignments.
// theta and topic_word are read from the final sample state. Deterministic
// for a fixed (corpus, k, iterations, alpha, beta, seed).
TopicModel fit_lda(const Corpus& corpus, int k, int iterations, double alpha, double beta,
                   std::uint64_t seed);

// Argmax criteria: document d goes to subset "t<j>" where j maximizes
// theta[d]; ties break toward the lowest topic index; empty subsets are
// omitted. A partition of the modelable documents.
CriteriaFamily derive_criteria(const TopicModel& model, const Corpus& corpus);

// Top-n terms of a topic by probability, ties by vocabulary index.
// topic_id is 1-based.
TopicLabel topic_top_words(const TopicModel& model, int topic_id, int n);

// CSV "doc_id,t1,...,tK"; row order defines corpus alignment.
void save_theta(const TopicModel& model, std::ostream& out);
TopicModel load_theta(std::istream& in);

// CSV "topic_id,w1,...,w|V|" over vocabulary indices.
void save_topic_word(const TopicModel& model, std::ostream& out);

}  // namespace docgroup
