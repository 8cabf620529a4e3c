#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "docgroup/corpus.hpp"

namespace docgroup {

enum class WeightMode { doc_count, amount_sum };

std::string weight_mode_name(WeightMode mode);
WeightMode parse_weight_mode(const std::string& name);

// Weighted bipartite graph over group nodes P and criterion nodes C.
// An edge (p, c) exists iff the underlying document sets intersect; its
// weight is the intersection size (doc_count) or the amount sum.
struct BipartiteGraph {
  WeightMode weight_mode = WeightMode::doc_count;
  std::vector<std::string> p_nodes;  // sorted
  std::vector<std::string> c_nodes;  // sorted
  std::map<std::pair<std::string, std::string>, double> edges;  // (p, c) -> w

  // Adjacency lists sorted by neighbor id, rebuilt by finalize().
  std::map<std::string, std::vector<std::pair<std::string, double>>> adj_p;
  std::map<std::string, std::vector<std::pair<std::string, double>>> adj_c;

  void finalize();
  bool has_p(const std::string& id) const { return adj_p.count(id) > 0; }
  bool has_c(const std::string& id) const { return adj_c.count(id) > 0; }
};

BipartiteGraph build_bipartite(const GroupPartition& groups, const CriteriaFamily& criteria,
                               WeightMode mode, const Corpus& corpus);

// Incident edges of a node on either side. Accepts "p:"/"c:" prefixed ids to
// disambiguate when a group and a criterion share a label.
std::vector<std::pair<std::string, double>> neighbors(const BipartiteGraph& graph,
                                                      const std::string& node);

// TSV: "#weight_mode=<mode>" header, optional single-column node lines
// ("p:<id>" / "c:<id>", required only for isolated nodes), then edge rows
// "p:<group>\tc:<criterion>\t<weight>".
void save_graph(const BipartiteGraph& graph, std::ostream& out);
BipartiteGraph load_graph(std::istream& in);

void export_dot(const BipartiteGraph& graph, std::ostream& out);
void export_json(const BipartiteGraph& graph, std::ostream& out);

}  // namespace docgroup
