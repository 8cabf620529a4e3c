#include "docgroup/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "docgroup/util.hpp"
#include "json.hpp"

namespace docgroup {

std::string weight_mode_name(WeightMode mode) {
  return mode == WeightMode::doc_count ? "doc_count" : "amount_sum";
}

WeightMode parse_weight_mode(const std::string& name) {
  if (name == "doc_count") return WeightMode::doc_count;
  if (name == "amount_sum") return WeightMode::amount_sum;
  throw std::invalid_argument("unknown weight mode '" + name + "'");
}

void BipartiteGraph::finalize() {
  adj_p.clear();
  adj_c.clear();
  for (const std::string& p : p_nodes) adj_p[p];
  for (const std::string& c : c_nodes) adj_c[c];
  for (const auto& [key, w] : edges) {
    adj_p[key.first].emplace_back(key.second, w);
    adj_c[key.second].emplace_back(key.first, w);
  }
  // edges is sorted by (p, c), so adj_p lists are already ordered; adj_c
  // lists need a sort by neighbor id.
  for (auto& [id, list] : adj_c) {
    std::sort(list.begin(), list.end());
  }
  p_nodes.clear();
  c_nodes.clear();
  for (const auto& [id, list] : adj_p) p_nodes.push_back(id);
  for (const auto& [id, list] : adj_c) c_nodes.push_back(id);
}

BipartiteGraph build_bipartite(const GroupPartition& groups, const CriteriaFamily& criteria,
                               WeightMode mode, const Corpus& corpus) {
  std::set<std::string> group_docs;
  for (const auto& [gid, docs] : groups.groups) group_docs.insert(docs.begin(), docs.end());
  bool any_shared = false;
  for (const auto& [cid, docs] : criteria.criteria) {
    for (const std::string& d : docs) {
      if (group_docs.count(d)) {
        any_shared = true;
        break;
      }
    }
    if (any_shared) break;
  }
  if (!any_shared) {
    throw std::runtime_error("build_bipartite: groups and criteria share no documents");
  }

  BipartiteGraph graph;
  graph.weight_mode = mode;
  for (const auto& [gid, gdocs] : groups.groups) {
    graph.p_nodes.push_back(gid);
    for (const auto& [cid, cdocs] : criteria.criteria) {
      double weight = 0.0;
      for (const std::string& d : gdocs) {
        if (!cdocs.count(d)) continue;
        if (mode == WeightMode::doc_count) {
          weight += 1.0;
        } else {
          const Document& doc = corpus.by_id(d);
          if (!doc.amount.has_value()) {
            throw std::runtime_error("build_bipartite: document '" + d +
                                     "' has no amount (required for amount_sum)");
          }
          weight += *doc.amount;
        }
      }
      if (weight > 0.0) {
        graph.edges.emplace(std::make_pair(gid, cid), weight);
      }
    }
  }
  for (const auto& [cid, cdocs] : criteria.criteria) graph.c_nodes.push_back(cid);
  graph.finalize();
  return graph;
}

namespace {

// Resolves a possibly "p:"/"c:" prefixed node id to one side's adjacency.
const std::vector<std::pair<std::string, double>>& resolve_node(const BipartiteGraph& graph,
                                                                const std::string& node) {
  if (node.rfind("p:", 0) == 0) {
    auto it = graph.adj_p.find(node.substr(2));
    if (it == graph.adj_p.end()) throw std::runtime_error("unknown node '" + node + "'");
    return it->second;
  }
  if (node.rfind("c:", 0) == 0) {
    auto it = graph.adj_c.find(node.substr(2));
    if (it == graph.adj_c.end()) throw std::runtime_error("unknown node '" + node + "'");
    return it->second;
  }
  auto p_it = graph.adj_p.find(node);
  auto c_it = graph.adj_c.find(node);
  if (p_it != graph.adj_p.end() && c_it != graph.adj_c.end()) {
    throw std::runtime_error("node '" + node + "' exists on both sides; use a p:/c: prefix");
  }
  if (p_it != graph.adj_p.end()) return p_it->second;
  if (c_it != graph.adj_c.end()) return c_it->second;
  throw std::runtime_error("unknown node '" + node + "'");
}

}  // namespace

std::vector<std::pair<std::string, double>> neighbors(const BipartiteGraph& graph,
                                                      const std::string& node) {
  return resolve_node(graph, node);
}

void save_graph(const BipartiteGraph& graph, std::ostream& out) {
  out << "#weight_mode=" << weight_mode_name(graph.weight_mode) << "\n";
  for (const auto& [id, list] : graph.adj_p) {
    if (list.empty()) out << "p:" << id << "\n";
  }
  for (const auto& [id, list] : graph.adj_c) {
    if (list.empty()) out << "c:" << id << "\n";
  }
  for (const auto& [key, w] : graph.edges) {
    out << "p:" << key.first << '\t' << "c:" << key.second << '\t' << format_weight(w) << "\n";
  }
}

BipartiteGraph load_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("graph file is empty");
  line = strip_cr(line);
  if (line.rfind("#weight_mode=", 0) != 0) {
    throw std::runtime_error("graph line 1: expected '#weight_mode=<doc_count|amount_sum>'");
  }
  BipartiteGraph graph;
  graph.weight_mode = parse_weight_mode(line.substr(13));

  std::set<std::string> p_set, c_set;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    const std::string where = "graph line " + std::to_string(line_no);
    if (fields.size() == 1) {
      // isolated node declaration
      if (fields[0].rfind("p:", 0) == 0 && fields[0].size() > 2) {
        p_set.insert(fields[0].substr(2));
      } else if (fields[0].rfind("c:", 0) == 0 && fields[0].size() > 2) {
        c_set.insert(fields[0].substr(2));
      } else {
        throw std::runtime_error(where + ": node line must be 'p:<id>' or 'c:<id>'");
      }
      continue;
    }
    if (fields.size() != 3) {
      throw std::runtime_error(where + ": expected 3 tab-separated fields, got " +
                               std::to_string(fields.size()));
    }
    if (fields[0].rfind("p:", 0) != 0 || fields[0].size() <= 2) {
      throw std::runtime_error(where + ": edge endpoint '" + fields[0] +
                               "' is not a declared group node (expected 'p:<id>')");
    }
    if (fields[1].rfind("c:", 0) != 0 || fields[1].size() <= 2) {
      throw std::runtime_error(where + ": edge endpoint '" + fields[1] +
                               "' is not a declared criterion node (expected 'c:<id>')");
    }
    double weight = 0.0;
    if (!parse_double(fields[2], weight)) {
      throw std::runtime_error(where + ": invalid weight '" + fields[2] + "'");
    }
    if (weight <= 0.0) {
      throw std::runtime_error(where + ": edge weight must be positive, got " + fields[2]);
    }
    if (graph.weight_mode == WeightMode::doc_count && std::floor(weight) != weight) {
      throw std::runtime_error(where + ": doc_count weights must be integers, got " + fields[2]);
    }
    const std::string p = fields[0].substr(2);
    const std::string c = fields[1].substr(2);
    if (!graph.edges.emplace(std::make_pair(p, c), weight).second) {
      throw std::runtime_error(where + ": duplicate edge (" + fields[0] + ", " + fields[1] + ")");
    }
    p_set.insert(p);
    c_set.insert(c);
  }
  graph.p_nodes.assign(p_set.begin(), p_set.end());
  graph.c_nodes.assign(c_set.begin(), c_set.end());
  if (graph.p_nodes.empty() && graph.c_nodes.empty()) {
    throw std::runtime_error("graph file declares no nodes");
  }
  graph.finalize();
  return graph;
}

namespace {

std::string dot_quote(const std::string& id) {
  std::string out = "\"";
  for (char ch : id) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void export_dot(const BipartiteGraph& graph, std::ostream& out) {
  out << "graph G {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box];\n  { rank=same;";
  for (const std::string& p : graph.p_nodes) out << ' ' << dot_quote("p:" + p) << ';';
  out << " }\n";
  out << "  node [shape=ellipse];\n  { rank=same;";
  for (const std::string& c : graph.c_nodes) out << ' ' << dot_quote("c:" + c) << ';';
  out << " }\n";
  for (const auto& [key, w] : graph.edges) {
    out << "  " << dot_quote("p:" + key.first) << " -- " << dot_quote("c:" + key.second)
        << " [label=" << dot_quote(format_weight(w)) << "];\n";
  }
  out << "}\n";
}

void export_json(const BipartiteGraph& graph, std::ostream& out) {
  nlohmann::json j;
  j["weight_mode"] = weight_mode_name(graph.weight_mode);
  j["p_nodes"] = graph.p_nodes;
  j["c_nodes"] = graph.c_nodes;
  j["edges"] = nlohmann::json::array();
  for (const auto& [key, w] : graph.edges) {
    j["edges"].push_back({{"p", key.first}, {"c", key.second}, {"weight", w}});
  }
  out << j.dump(2) << "\n";
}

}  // namespace docgroup
