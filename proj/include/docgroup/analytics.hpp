#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "docgroup/graph.hpp"

namespace docgroup {

enum class Measure { cosine, weighted_jaccard, spearman };

std::string measure_name(Measure measure);
Measure parse_measure(const std::string& name);

// Weighted graph over group nodes induced by thresholded pairwise
// similarity; edges carry scores in (xi, 1].
struct SimilarityGraph {
  std::vector<std::string> nodes;  // sorted
  std::map<std::pair<std::string, std::string>, double> edges;  // u < v
  double xi = 0.5;
};

struct Clustering {
  std::map<std::string, int> assignment;
  double modularity = 0.0;
};

struct TrendPoint {
  int year = 0;
  double weight = 0.0;
  double proportion = 0.0;
};

struct TrendSeries {
  std::string topic_id;
  std::vector<TrendPoint> points;  // ordered by year, gaps filled with 0
};

// Shannon entropy of a node's normalized incident weights, log base = the
// number of incident edges. 0 for nodes with at most one edge, 1 for a
// uniform weight vector.
double node_entropy(const BipartiteGraph& graph, const std::string& node);
double entropy_from_weights(const std::vector<double>& weights);

enum class Side { P, C };
enum class Order { asc, desc };

std::vector<std::pair<std::string, double>> entropy_ranking(const BipartiteGraph& graph, Side side,
                                                            Order order);

// Similarity of two group nodes over their joint neighborhood vectors
// (absent edges contribute 0). Cosine and weighted Jaccard land in [0,1];
// Spearman is reported raw in [-1,1].
double similarity(const BipartiteGraph& graph, const std::string& u, const std::string& v,
                  Measure measure);

std::vector<std::pair<std::string, double>> top_k_similar(const BipartiteGraph& graph,
                                                          const std::string& u, int k,
                                                          Measure measure);

// All unordered group pairs, keeping edges with score strictly above xi.
SimilarityGraph build_similarity_graph(const BipartiteGraph& graph, double xi,
                                       Measure measure = Measure::cosine);

// Weighted Louvain: greedy local moves (seeded visit order, ties keep the
// current community) followed by graph aggregation, repeated until the
// modularity gain drops below 1e-9.
Clustering louvain_cluster(const SimilarityGraph& simgraph, std::uint64_t seed);

// Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j); 0 when m = 0.
double modularity(const SimilarityGraph& simgraph, const std::map<std::string, int>& assignment);

// Per-year weight to a topic and the topic's share of the year's total
// outgoing weight. Group nodes must be year-keyed.
TrendSeries topic_trend(const BipartiteGraph& graph, const std::string& topic_id);

// Same TSV shape as the bipartite graph files, with #weight_mode=similarity
// and both endpoints p:-prefixed.
void save_similarity_graph(const SimilarityGraph& simgraph, std::ostream& out);
SimilarityGraph load_similarity_graph(std::istream& in);

}  // namespace docgroup
