#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "docgroup/analytics.hpp"
#include "docgroup/corpus.hpp"
#include "docgroup/graph.hpp"
#include "docgroup/topics.hpp"

namespace docgroup {

struct PairResult {
  std::string doc_a;  // doc_a < doc_b lexicographically
  std::string doc_b;
  double score = 0.0;  // in [0, 1]
  std::string block;   // criterion id, "gA|gB" group pair, or "none"
};

enum class BlockingKind { none, same_criterion, similar_groups };

std::string blocking_kind_name(BlockingKind kind);
BlockingKind parse_blocking_kind(const std::string& name);

struct BlockingStrategy {
  BlockingKind kind = BlockingKind::none;
  // similar_groups: either keep group pairs above this threshold...
  double group_threshold = 0.5;
  // ...or the top-k group pairs by similarity, when set.
  std::optional<int> top_k_group_pairs;
  // also compare documents inside the same group
  bool include_within_group = false;
};

struct BlockedPairsResult {
  std::vector<PairResult> pairs;
  std::size_t candidates_evaluated = 0;
};

// 1 - Hellinger distance between two topic-proportion rows.
double hellinger_similarity(const std::vector<double>& a, const std::vector<double>& b);
double hellinger_similarity(const TopicModel& model, std::size_t x, std::size_t y);

// Candidate pairs per strategy, scored by Hellinger similarity,
// deduplicated canonically, ranked by (score desc, pair id asc); keeps the
// top_n results with score >= min_score. similar_groups needs a similarity
// source over the groups: a similarity graph, or a bipartite graph to score
// group pairs on the fly (cosine).
BlockedPairsResult blocked_pairs(const TopicModel& model, const Corpus& corpus,
                                 const GroupPartition& groups, const CriteriaFamily& criteria,
                                 const BlockingStrategy& strategy, int top_n, double min_score,
                                 const BipartiteGraph* graph = nullptr,
                                 const SimilarityGraph* simgraph = nullptr);

// Exhaustive all-pairs scan; the reference ranking blocking is judged against.
std::vector<PairResult> brute_force_pairs(const TopicModel& model, int top_n, double min_score);

}  // namespace docgroup
