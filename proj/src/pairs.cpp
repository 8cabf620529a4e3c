#include "docgroup/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace docgroup {

std::string blocking_kind_name(BlockingKind kind) {
  switch (kind) {
    case BlockingKind::none: return "none";
    case BlockingKind::same_criterion: return "same_criterion";
    case BlockingKind::similar_groups: return "similar_groups";
  }
  return "?";
}

BlockingKind parse_blocking_kind(const std::string& name) {
  if (name == "none") return BlockingKind::none;
  if (name == "same_criterion") return BlockingKind::same_criterion;
  if (name == "similar_groups") return BlockingKind::similar_groups;
  throw std::invalid_argument("unknown blocking strategy '" + name + "'");
}

namespace {

void check_probability_row(const std::vector<double>& row, const char* which) {
  double sum = 0.0;
  for (double v : row) {
    if (v < 0.0) {
      throw std::invalid_argument(std::string("hellinger_similarity: ") + which +
                                  " row has a negative entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument(std::string("hellinger_similarity: ") + which +
                                " row is not a probability vector");
  }
}

double hellinger_from_sqrt(const std::vector<double>& sa, const std::vector<double>& sb) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = sa[i] - sb[i];
    sum += d * d;
  }
  const double score = 1.0 - std::sqrt(sum / 2.0);
  return std::clamp(score, 0.0, 1.0);
}

std::vector<std::vector<double>> sqrt_rows(const std::vector<std::vector<double>>& theta) {
  std::vector<std::vector<double>> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out[i].reserve(theta[i].size());
    for (double v : theta[i]) out[i].push_back(std::sqrt(v));
  }
  return out;
}

struct Candidate {
  std::size_t a;  // theta row indices, doc_ids[a] < doc_ids[b]
  std::size_t b;
  std::string block;
};

std::vector<PairResult> score_and_rank(const TopicModel& model,
                                       const std::vector<Candidate>& candidates, int top_n,
                                       double min_score) {
  const auto sq = sqrt_rows(model.theta);
  std::vector<PairResult> results;
  results.reserve(candidates.size());
  for (const Candidate& cand : candidates) {
    const double score = hellinger_from_sqrt(sq[cand.a], sq[cand.b]);
    if (score < min_score) continue;
    results.push_back({model.doc_ids[cand.a], model.doc_ids[cand.b], score, cand.block});
  }
  std::sort(results.begin(), results.end(), [](const PairResult& x, const PairResult& y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.doc_a != y.doc_a) return x.doc_a < y.doc_a;
    return x.doc_b < y.doc_b;
  });
  if (results.size() > static_cast<std::size_t>(top_n)) {
    results.resize(static_cast<std::size_t>(top_n));
  }
  return results;
}

Candidate make_candidate(const TopicModel& model, std::size_t i, std::size_t j, std::string block) {
  if (model.doc_ids[j] < model.doc_ids[i]) std::swap(i, j);
  return {i, j, std::move(block)};
}

}  // namespace

double hellinger_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hellinger_similarity: rows have different lengths");
  }
  if (a.empty()) throw std::invalid_argument("hellinger_similarity: empty rows");
  check_probability_row(a, "first");
  check_probability_row(b, "second");
  std::vector<double> sa(a.size()), sb(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa[i] = std::sqrt(a[i]);
    sb[i] = std::sqrt(b[i]);
  }
  return hellinger_from_sqrt(sa, sb);
}

double hellinger_similarity(const TopicModel& model, std::size_t x, std::size_t y) {
  if (x >= model.theta.size() || y >= model.theta.size()) {
    throw std::invalid_argument("hellinger_similarity: document index out of range");
  }
  return hellinger_similarity(model.theta[x], model.theta[y]);
}

std::vector<PairResult> brute_force_pairs(const TopicModel& model, int top_n, double min_score) {
  if (top_n < 1) throw std::invalid_argument("brute_force_pairs: top_n must be positive");
  std::vector<Candidate> candidates;
  const std::size_t n = model.theta.size();
  candidates.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      candidates.push_back(make_candidate(model, i, j, "none"));
    }
  }
  return score_and_rank(model, candidates, top_n, min_score);
}

BlockedPairsResult blocked_pairs(const TopicModel& model, const Corpus& corpus,
                                 const GroupPartition& groups, const CriteriaFamily& criteria,
                                 const BlockingStrategy& strategy, int top_n, double min_score,
                                 const BipartiteGraph* graph, const SimilarityGraph* simgraph) {
  if (top_n < 1) throw std::invalid_argument("blocked_pairs: top_n must be positive");
  const auto modelable = corpus.modelable_indices();
  if (model.theta.size() != modelable.size()) {
    throw std::runtime_error("blocked_pairs: theta has " + std::to_string(model.theta.size()) +
                             " rows but corpus has " + std::to_string(modelable.size()) +
                             " modelable documents");
  }
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < model.doc_ids.size(); ++r) {
    const std::string& id = model.doc_ids[r];
    if (!corpus.contains(id)) {
      throw std::runtime_error("blocked_pairs: theta row '" + id + "' is not in the corpus");
    }
    row_of.emplace(id, r);
  }

  std::vector<Candidate> candidates;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto add_pair = [&](const std::string& da, const std::string& db, const std::string& block) {
    auto ia = row_of.find(da);
    auto ib = row_of.find(db);
    if (ia == row_of.end() || ib == row_of.end()) return;  // not modelable, no theta row
    Candidate cand = make_candidate(model, ia->second, ib->second, block);
    if (seen.emplace(cand.a, cand.b).second) candidates.push_back(std::move(cand));
  };

  switch (strategy.kind) {
    case BlockingKind::none: {
      for (std::size_t i = 0; i < model.doc_ids.size(); ++i) {
        for (std::size_t j = i + 1; j < model.doc_ids.size(); ++j) {
          candidates.push_back(make_candidate(model, i, j, "none"));
        }
      }
      break;
    }
    case BlockingKind::same_criterion: {
      for (const auto& [cid, docs] : criteria.criteria) {
        for (auto it = docs.begin(); it != docs.end(); ++it) {
          for (auto jt = std::next(it); jt != docs.end(); ++jt) {
            add_pair(*it, *jt, cid);
          }
        }
      }
      break;
    }
    case BlockingKind::similar_groups: {
      if (graph == nullptr && simgraph == nullptr) {
        throw std::runtime_error(
            "blocked_pairs: similar_groups requires a similarity source over the groups");
      }
      // group pairs of interest, scored
      std::vector<std::pair<std::pair<std::string, std::string>, double>> group_pairs;
      if (simgraph != nullptr) {
        for (const auto& [key, w] : simgraph->edges) group_pairs.emplace_back(key, w);
      } else {
        std::vector<std::string> gids;
        for (const auto& [gid, docs] : groups.groups) gids.push_back(gid);
        for (std::size_t i = 0; i < gids.size(); ++i) {
          for (std::size_t j = i + 1; j < gids.size(); ++j) {
            group_pairs.emplace_back(std::make_pair(gids[i], gids[j]),
                                     similarity(*graph, gids[i], gids[j], Measure::cosine));
          }
        }
      }
      if (strategy.top_k_group_pairs.has_value()) {
        std::sort(group_pairs.begin(), group_pairs.end(), [](const auto& x, const auto& y) {
          if (x.second != y.second) return x.second > y.second;
          return x.first < y.first;
        });
        const auto k = static_cast<std::size_t>(std::max(0, *strategy.top_k_group_pairs));
        if (group_pairs.size() > k) group_pairs.resize(k);
        std::sort(group_pairs.begin(), group_pairs.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
      } else {
        std::erase_if(group_pairs,
                      [&strategy](const auto& gp) { return gp.second <= strategy.group_threshold; });
      }

      for (const auto& [gp, score] : group_pairs) {
        auto ga = groups.groups.find(gp.first);
        auto gb = groups.groups.find(gp.second);
        if (ga == groups.groups.end() || gb == groups.groups.end()) {
          throw std::runtime_error("blocked_pairs: similarity source names unknown group '" +
                                   (ga == groups.groups.end() ? gp.first : gp.second) + "'");
        }
        const std::string block = gp.first + "|" + gp.second;
        for (const std::string& da : ga->second) {
          for (const std::string& db : gb->second) {
            add_pair(da, db, block);
          }
        }
      }
      if (strategy.include_within_group) {
        for (const auto& [gid, docs] : groups.groups) {
          const std::string block = gid + "|" + gid;
          for (auto it = docs.begin(); it != docs.end(); ++it) {
            for (auto jt = std::next(it); jt != docs.end(); ++jt) {
              add_pair(*it, *jt, block);
            }
          }
        }
      }
      break;
    }
  }

  BlockedPairsResult result;
  result.candidates_evaluated = candidates.size();
  result.pairs = score_and_rank(model, candidates, top_n, min_score);
  return result;
}

}  // namespace docgroup
