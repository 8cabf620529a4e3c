#include "docgroup/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "docgroup/util.hpp"

namespace docgroup {

std::string measure_name(Measure measure) {
  switch (measure) {
    case Measure::cosine: return "cosine";
    case Measure::weighted_jaccard: return "weighted_jaccard";
    case Measure::spearman: return "spearman";
  }
  return "?";
}

Measure parse_measure(const std::string& name) {
  if (name == "cosine") return Measure::cosine;
  if (name == "weighted_jaccard") return Measure::weighted_jaccard;
  if (name == "spearman") return Measure::spearman;
  throw std::invalid_argument("unknown measure '" + name + "'");
}

double entropy_from_weights(const std::vector<double>& weights) {
  if (weights.size() <= 1) return 0.0;
  double sum = 0.0;
  double acc = 0.0;  // sum of w*log(w)
  for (double w : weights) {
    sum += w;
    acc += w * std::log(w);
  }
  // -sum_i p_i log_d(p_i) with p_i = w_i/sum, rewritten so a uniform unit
  // vector evaluates to exactly 1.
  double h = (std::log(sum) - acc / sum) / std::log(static_cast<double>(weights.size()));
  return std::clamp(h, 0.0, 1.0);
}

double node_entropy(const BipartiteGraph& graph, const std::string& node) {
  const auto incident = neighbors(graph, node);
  std::vector<double> weights;
  weights.reserve(incident.size());
  for (const auto& [id, w] : incident) weights.push_back(w);
  return entropy_from_weights(weights);
}

std::vector<std::pair<std::string, double>> entropy_ranking(const BipartiteGraph& graph, Side side,
                                                            Order order) {
  const auto& adj = side == Side::P ? graph.adj_p : graph.adj_c;
  if (adj.empty()) {
    throw std::runtime_error("entropy_ranking: side has no nodes");
  }
  std::vector<std::pair<std::string, double>> ranking;
  ranking.reserve(adj.size());
  for (const auto& [id, list] : adj) {
    std::vector<double> weights;
    weights.reserve(list.size());
    for (const auto& [nid, w] : list) weights.push_back(w);
    ranking.emplace_back(id, entropy_from_weights(weights));
  }
  std::sort(ranking.begin(), ranking.end(), [order](const auto& a, const auto& b) {
    if (a.second != b.second) {
      return order == Order::asc ? a.second < b.second : a.second > b.second;
    }
    return a.first < b.first;
  });
  return ranking;
}

namespace {

// Aligned weight vectors over the union of two group nodes' neighborhoods.
void joint_profile(const BipartiteGraph& graph, const std::string& u, const std::string& v,
                   std::vector<double>& a, std::vector<double>& b) {
  if (!graph.has_p(u)) throw std::runtime_error("node '" + u + "' is not a group node");
  if (!graph.has_p(v)) throw std::runtime_error("node '" + v + "' is not a group node");
  if (u == v) throw std::runtime_error("similarity requires two distinct group nodes");
  const auto& nu = graph.adj_p.at(u);
  const auto& nv = graph.adj_p.at(v);
  a.clear();
  b.clear();
  std::size_t i = 0, j = 0;
  while (i < nu.size() || j < nv.size()) {
    if (j == nv.size() || (i < nu.size() && nu[i].first < nv[j].first)) {
      a.push_back(nu[i].second);
      b.push_back(0.0);
      ++i;
    } else if (i == nu.size() || nv[j].first < nu[i].first) {
      a.push_back(0.0);
      b.push_back(nv[j].second);
      ++j;
    } else {
      a.push_back(nu[i].second);
      b.push_back(nv[j].second);
      ++i;
      ++j;
    }
  }
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na2 = 0.0, nb2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na2 += a[i] * a[i];
    nb2 += b[i] * b[i];
  }
  if (na2 == 0.0 || nb2 == 0.0) return 0.0;
  // weights are positive, so the true value lies in [0, 1]; clamp rounding
  return std::clamp(dot / std::sqrt(na2 * nb2), 0.0, 1.0);
}

double weighted_jaccard(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::min(a[i], b[i]);
    den += std::max(a[i], b[i]);
  }
  if (den == 0.0) return 0.0;
  return std::clamp(num / den, 0.0, 1.0);
}

// Average ranks (1-based), ties averaged.
std::vector<double> rank_transform(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&values](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = rank_transform(a);
  const auto rb = rank_transform(b);
  const double n = static_cast<double>(ra.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;  // constant vector, no rank order
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

}  // namespace

double similarity(const BipartiteGraph& graph, const std::string& u, const std::string& v,
                  Measure measure) {
  std::vector<double> a, b;
  joint_profile(graph, u, v, a, b);
  switch (measure) {
    case Measure::cosine: return cosine(a, b);
    case Measure::weighted_jaccard: return weighted_jaccard(a, b);
    case Measure::spearman: return spearman(a, b);
  }
  return 0.0;
}

std::vector<std::pair<std::string, double>> top_k_similar(const BipartiteGraph& graph,
                                                          const std::string& u, int k,
                                                          Measure measure) {
  if (k < 1) throw std::invalid_argument("top_k_similar: k must be positive");
  if (!graph.has_p(u)) throw std::runtime_error("node '" + u + "' is not a group node");
  std::vector<std::pair<std::string, double>> scored;
  for (const std::string& v : graph.p_nodes) {
    if (v == u) continue;
    scored.emplace_back(v, similarity(graph, u, v, measure));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));
  return scored;
}

SimilarityGraph build_similarity_graph(const BipartiteGraph& graph, double xi, Measure measure) {
  if (xi < 0.0 || xi >= 1.0) {
    throw std::invalid_argument("build_similarity_graph: xi must lie in [0, 1)");
  }
  if (measure == Measure::spearman) {
    throw std::invalid_argument(
        "build_similarity_graph: spearman scores can be negative and do not fit the (xi, 1] "
        "edge-weight contract");
  }
  if (graph.p_nodes.size() < 2) {
    throw std::runtime_error("build_similarity_graph: need at least two group nodes");
  }
  SimilarityGraph simgraph;
  simgraph.xi = xi;
  simgraph.nodes = graph.p_nodes;
  for (std::size_t i = 0; i < graph.p_nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.p_nodes.size(); ++j) {
      const double score = similarity(graph, graph.p_nodes[i], graph.p_nodes[j], measure);
      if (score > xi) {
        simgraph.edges.emplace(std::make_pair(graph.p_nodes[i], graph.p_nodes[j]), score);
      }
    }
  }
  return simgraph;
}

double modularity(const SimilarityGraph& simgraph, const std::map<std::string, int>& assignment) {
  std::map<std::string, double> degree;
  for (const std::string& node : simgraph.nodes) {
    if (!assignment.count(node)) {
      throw std::runtime_error("modularity: node '" + node + "' is not covered by the assignment");
    }
    degree[node] = 0.0;
  }
  double m = 0.0;
  for (const auto& [key, w] : simgraph.edges) {
    degree[key.first] += w;
    degree[key.second] += w;
    m += w;
  }
  if (m == 0.0) return 0.0;

  std::map<int, double> in_weight, total_degree;
  for (const auto& [node, deg] : degree) total_degree[assignment.at(node)] += deg;
  for (const auto& [key, w] : simgraph.edges) {
    if (assignment.at(key.first) == assignment.at(key.second)) in_weight[assignment.at(key.first)] += w;
  }
  double q = 0.0;
  for (const auto& [cluster, deg] : total_degree) {
    const double in = in_weight.count(cluster) ? in_weight.at(cluster) : 0.0;
    const double frac = deg / (2.0 * m);
    q += in / m - frac * frac;
  }
  return q;
}

namespace {

// Aggregated working graph for Louvain levels. Self-loops are stored once in
// `loop`; degrees count them twice.
struct WorkGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> loop;
  std::vector<double> degree;
  double two_m = 0.0;

  int size() const { return static_cast<int>(adj.size()); }
};

std::vector<int> compact_ids(std::vector<int> comm) {
  std::map<int, int> relabel;
  for (int c : comm) relabel.emplace(c, 0);
  int next = 0;
  for (auto& [old_id, new_id] : relabel) new_id = next++;
  for (int& c : comm) c = relabel.at(c);
  return comm;
}

// One local-move phase starting from `init` (compacted community ids).
// Returns the compacted assignment after no node can improve its community.
std::vector<int> local_moves(const WorkGraph& g, Rng& rng, const std::vector<int>& init) {
  const int n = g.size();
  std::vector<int> comm = compact_ids(init);
  std::vector<double> comm_degree(n, 0.0);
  std::vector<int> comm_size(n, 0);
  std::set<int> empty_slots;
  for (int i = 0; i < n; ++i) {
    comm_degree[comm[i]] += g.degree[i];
    ++comm_size[comm[i]];
  }
  for (int c = 0; c < n; ++c) {
    if (comm_size[c] == 0) empty_slots.insert(c);
  }

  std::vector<int> visit(n);
  for (int i = 0; i < n; ++i) visit[i] = i;

  bool moved = true;
  while (moved) {
    moved = false;
    rng.shuffle(visit);
    for (int node : visit) {
      const int old_comm = comm[node];
      // weights from node to each adjacent community
      std::map<int, double> links;
      links[old_comm] += 0.0;
      for (const auto& [nbr, w] : g.adj[node]) links[comm[nbr]] += w;

      comm_degree[old_comm] -= g.degree[node];
      --comm_size[old_comm];

      // gain of inserting into c, scaled by m (argmax-preserving):
      //   l_ic - tot_c * k_i / 2m
      auto gain = [&](int c) {
        const double l = links.count(c) ? links.at(c) : 0.0;
        return l - comm_degree[c] * g.degree[node] / g.two_m;
      };

      int best_comm = old_comm;
      double best_gain = gain(old_comm);
      // breaking out into a fresh singleton community has gain exactly 0
      if (comm_size[old_comm] > 0 && !empty_slots.empty() && 0.0 > best_gain) {
        best_comm = *empty_slots.begin();
        best_gain = 0.0;
      }
      for (const auto& [c, l] : links) {
        if (c == old_comm) continue;
        if (gain(c) > best_gain) {
          best_gain = gain(c);
          best_comm = c;
        }
      }

      comm_degree[best_comm] += g.degree[node];
      ++comm_size[best_comm];
      if (best_comm != old_comm) {
        comm[node] = best_comm;
        moved = true;
        empty_slots.erase(best_comm);
        if (comm_size[old_comm] == 0) {
          comm_degree[old_comm] = 0.0;  // clear accumulated drift
          empty_slots.insert(old_comm);
        }
      }
    }
  }
  return compact_ids(comm);
}

WorkGraph aggregate(const WorkGraph& g, const std::vector<int>& comm) {
  int n_comm = 0;
  for (int c : comm) n_comm = std::max(n_comm, c + 1);
  WorkGraph out;
  out.adj.resize(n_comm);
  out.loop.assign(n_comm, 0.0);
  out.degree.assign(n_comm, 0.0);
  std::vector<std::map<int, double>> between(n_comm);
  for (int i = 0; i < g.size(); ++i) {
    out.loop[comm[i]] += g.loop[i];
    for (const auto& [j, w] : g.adj[i]) {
      if (comm[i] == comm[j]) {
        if (i < j) out.loop[comm[i]] += w;  // each internal edge once
      } else {
        between[comm[i]][comm[j]] += w;
      }
    }
  }
  for (int c = 0; c < n_comm; ++c) {
    out.adj[c].assign(between[c].begin(), between[c].end());
    double deg = 2.0 * out.loop[c];
    for (const auto& [d, w] : out.adj[c]) deg += w;
    out.degree[c] = deg;
    out.two_m += deg;
  }
  return out;
}

double work_modularity(const WorkGraph& g, const std::vector<int>& comm) {
  if (g.two_m == 0.0) return 0.0;
  int n_comm = 0;
  for (int c : comm) n_comm = std::max(n_comm, c + 1);
  std::vector<double> in(n_comm, 0.0), tot(n_comm, 0.0);
  for (int i = 0; i < g.size(); ++i) {
    tot[comm[i]] += g.degree[i];
    in[comm[i]] += g.loop[i];
    for (const auto& [j, w] : g.adj[i]) {
      if (comm[i] == comm[j] && i < j) in[comm[i]] += w;
    }
  }
  const double m = g.two_m / 2.0;
  double q = 0.0;
  for (int c = 0; c < n_comm; ++c) {
    const double frac = tot[c] / g.two_m;
    q += in[c] / m - frac * frac;
  }
  return q;
}

std::vector<int> iota_vector(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// One louvain run: local moves on the base graph starting from `init`, then
// aggregate-and-move levels until the per-level gain drops below 1e-9.
// Returns the assignment over the base graph's nodes.
std::vector<int> run_levels(const WorkGraph& base, Rng& rng, const std::vector<int>& init) {
  std::vector<int> assignment = local_moves(base, rng, init);
  WorkGraph g = aggregate(base, assignment);
  double prev_q = work_modularity(base, assignment);
  while (true) {
    const std::vector<int> comm = local_moves(g, rng, iota_vector(g.size()));
    const double q = work_modularity(g, comm);
    if (q - prev_q < 1e-9) break;
    prev_q = q;
    for (int& c : assignment) c = comm[c];
    g = aggregate(g, comm);
  }
  return assignment;
}

}  // namespace

Clustering louvain_cluster(const SimilarityGraph& simgraph, std::uint64_t seed) {
  const int n = static_cast<int>(simgraph.nodes.size());
  std::map<std::string, int> index;
  for (int i = 0; i < n; ++i) index.emplace(simgraph.nodes[i], i);

  WorkGraph g;
  g.adj.resize(n);
  g.loop.assign(n, 0.0);
  g.degree.assign(n, 0.0);
  for (const auto& [key, w] : simgraph.edges) {
    const int u = index.at(key.first);
    const int v = index.at(key.second);
    g.adj[u].emplace_back(v, w);
    g.adj[v].emplace_back(u, w);
    g.degree[u] += w;
    g.degree[v] += w;
    g.two_m += 2.0 * w;
  }

  std::vector<int> node_comm = iota_vector(n);
  Rng rng(seed);
  if (g.two_m > 0.0) {
    // Iterate full louvain runs, seeding each from the previous partition;
    // the node-level restart lets members escape communities that the
    // aggregation levels froze too early.
    double q = work_modularity(g, node_comm);
    while (true) {
      const std::vector<int> next = run_levels(g, rng, node_comm);
      const double q_next = work_modularity(g, next);
      if (q_next - q < 1e-9) break;
      node_comm = next;
      q = q_next;
    }
  }

  Clustering result;
  std::map<int, int> relabel;
  for (const auto& [node, idx] : index) {
    auto [it, inserted] = relabel.try_emplace(node_comm[idx], static_cast<int>(relabel.size()));
    result.assignment.emplace(node, it->second);
  }
  result.modularity = modularity(simgraph, result.assignment);
  return result;
}

TrendSeries topic_trend(const BipartiteGraph& graph, const std::string& topic_id) {
  if (!graph.has_c(topic_id)) {
    throw std::runtime_error("unknown topic node '" + topic_id + "'");
  }
  std::map<int, std::pair<double, double>> years;  // year -> (weight to topic, total out)
  for (const auto& [id, list] : graph.adj_p) {
    long long year = 0;
    if (!parse_int(id, year)) {
      throw std::runtime_error("topic_trend: group node '" + id +
                               "' is not a year (build the graph with year groups)");
    }
    double to_topic = 0.0, total = 0.0;
    for (const auto& [cid, w] : list) {
      total += w;
      if (cid == topic_id) to_topic = w;
    }
    years[static_cast<int>(year)] = {to_topic, total};
  }
  if (years.empty()) {
    throw std::runtime_error("topic_trend: graph has no group nodes");
  }

  TrendSeries series;
  series.topic_id = topic_id;
  const int first = years.begin()->first;
  const int last = years.rbegin()->first;
  for (int year = first; year <= last; ++year) {
    TrendPoint point;
    point.year = year;
    auto it = years.find(year);
    if (it != years.end()) {
      point.weight = it->second.first;
      point.proportion = it->second.second > 0.0 ? it->second.first / it->second.second : 0.0;
    }
    series.points.push_back(point);
  }
  return series;
}

void save_similarity_graph(const SimilarityGraph& simgraph, std::ostream& out) {
  out << "#weight_mode=similarity\n";
  out << "#xi=" << format_double(simgraph.xi) << "\n";
  std::set<std::string> connected;
  for (const auto& [key, w] : simgraph.edges) {
    connected.insert(key.first);
    connected.insert(key.second);
  }
  for (const std::string& node : simgraph.nodes) {
    if (!connected.count(node)) out << "p:" << node << "\n";
  }
  for (const auto& [key, w] : simgraph.edges) {
    out << "p:" << key.first << '\t' << "p:" << key.second << '\t' << format_double(w) << "\n";
  }
}

SimilarityGraph load_similarity_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("similarity graph file is empty");
  line = strip_cr(line);
  if (line != "#weight_mode=similarity") {
    throw std::runtime_error("similarity graph line 1: expected '#weight_mode=similarity'");
  }
  SimilarityGraph simgraph;
  std::set<std::string> nodes;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string where = "similarity graph line " + std::to_string(line_no);
    if (line[0] == '#') {
      if (line.rfind("#xi=", 0) == 0) {
        if (!parse_double(line.substr(4), simgraph.xi)) {
          throw std::runtime_error(where + ": invalid xi value");
        }
      }
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() == 1) {
      if (fields[0].rfind("p:", 0) != 0 || fields[0].size() <= 2) {
        throw std::runtime_error(where + ": node line must be 'p:<id>'");
      }
      nodes.insert(fields[0].substr(2));
      continue;
    }
    if (fields.size() != 3) {
      throw std::runtime_error(where + ": expected 3 tab-separated fields");
    }
    for (int i = 0; i < 2; ++i) {
      if (fields[i].rfind("p:", 0) != 0 || fields[i].size() <= 2) {
        throw std::runtime_error(where + ": edge endpoint '" + fields[i] +
                                 "' is not a group node (expected 'p:<id>')");
      }
    }
    std::string u = fields[0].substr(2);
    std::string v = fields[1].substr(2);
    if (u == v) throw std::runtime_error(where + ": self-loops are not allowed");
    if (v < u) std::swap(u, v);
    double w = 0.0;
    if (!parse_double(fields[2], w) || w <= 0.0) {
      throw std::runtime_error(where + ": edge weight must be a positive number");
    }
    if (!simgraph.edges.emplace(std::make_pair(u, v), w).second) {
      throw std::runtime_error(where + ": duplicate edge");
    }
    nodes.insert(u);
    nodes.insert(v);
  }
  simgraph.nodes.assign(nodes.begin(), nodes.end());
  return simgraph;
}

}  // namespace docgroup
