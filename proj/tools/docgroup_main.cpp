// docgroup: compare groups of documents through a weighted bipartite graph
// of groups vs. topic criteria. See README.md for the pipeline.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "docgroup/analytics.hpp"
#include "docgroup/corpus.hpp"
#include "docgroup/eval.hpp"
#include "docgroup/graph.hpp"
#include "docgroup/pairs.hpp"
#include "docgroup/topics.hpp"
#include "docgroup/util.hpp"

namespace {

using namespace docgroup;

constexpr std::uint64_t kDefaultSeed = 42;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  return in;
}

// All output goes through a temp file + rename so a failing run never
// leaves a partially written artifact behind.
void atomic_write(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing output file '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, target);
}

char delimiter_for(const std::string& format) {
  if (format == "csv") return ',';
  if (format == "tsv") return '\t';
  throw std::invalid_argument("format '" + format + "' is not valid for tabular output");
}

Corpus load_corpus_file(const std::string& path) {
  auto in = open_input(path);
  return load_corpus(in, TokenizerConfig::defaults());
}

BipartiteGraph load_graph_file(const std::string& path) {
  auto in = open_input(path);
  return load_graph(in);
}

TopicModel load_theta_file(const std::string& path) {
  auto in = open_input(path);
  return load_theta(in);
}

GroupKey parse_group_key(const std::string& name) {
  if (name == "group") return GroupKey::group;
  if (name == "year") return GroupKey::year;
  throw std::invalid_argument("unknown group key '" + name + "'");
}

CriteriaFamily criteria_for(const Corpus& corpus, const std::string& theta_path,
                            const std::string& labels_path) {
  if (!labels_path.empty()) {
    auto in = open_input(labels_path);
    return criteria_from_labels(corpus, load_labels_csv(in));
  }
  const TopicModel model = load_theta_file(theta_path);
  return derive_criteria(model, corpus);
}

struct FitOpts {
  std::string input, output, topic_word_output;
  int k = 0;
  int iterations = kDefaultIterations;
  double alpha = 0.0;  // 0 means 5/k
  double beta = kDefaultBeta;
  std::uint64_t seed = kDefaultSeed;
};

void run_fit(const FitOpts& opt) {
  const Corpus corpus = load_corpus_file(opt.input);
  const double alpha = opt.alpha > 0.0 ? opt.alpha : default_alpha(opt.k);
  const TopicModel model = fit_lda(corpus, opt.k, opt.iterations, alpha, opt.beta, opt.seed);
  std::ostringstream theta_out;
  save_theta(model, theta_out);
  std::ostringstream tw_out;
  if (!opt.topic_word_output.empty()) save_topic_word(model, tw_out);
  atomic_write(opt.output, theta_out.str());
  if (!opt.topic_word_output.empty()) atomic_write(opt.topic_word_output, tw_out.str());
}

struct BuildOpts {
  std::string input, theta, labels, output;
  std::string group_key = "group";
  std::string weight_mode = "doc_count";
  std::string format = "tsv";
};

void run_build(const BuildOpts& opt) {
  if (opt.theta.empty() && opt.labels.empty()) {
    throw std::runtime_error("build requires --theta or --labels as the criteria source");
  }
  const Corpus corpus = load_corpus_file(opt.input);
  const GroupPartition groups = assign_groups(corpus, parse_group_key(opt.group_key));
  const CriteriaFamily criteria = criteria_for(corpus, opt.theta, opt.labels);
  const BipartiteGraph graph =
      build_bipartite(groups, criteria, parse_weight_mode(opt.weight_mode), corpus);
  std::ostringstream out;
  if (opt.format == "tsv") {
    save_graph(graph, out);
  } else if (opt.format == "dot") {
    export_dot(graph, out);
  } else if (opt.format == "json") {
    export_json(graph, out);
  } else {
    throw std::invalid_argument("format '" + opt.format + "' is not valid for graphs");
  }
  atomic_write(opt.output, out.str());
}

struct EntropyOpts {
  std::string input, output;
  std::string side = "P";
  std::string order = "asc";
  std::string format = "csv";
};

void run_entropy(const EntropyOpts& opt) {
  const BipartiteGraph graph = load_graph_file(opt.input);
  const Side side = opt.side == "P" ? Side::P : Side::C;
  const Order order = opt.order == "asc" ? Order::asc : Order::desc;
  const auto ranking = entropy_ranking(graph, side, order);
  const char delim = delimiter_for(opt.format);
  std::ostringstream out;
  out << "#weight_mode=" << weight_mode_name(graph.weight_mode) << "\n";
  out << "node" << delim << "entropy\n";
  for (const auto& [node, h] : ranking) {
    out << node << delim << format_double(h) << "\n";
  }
  atomic_write(opt.output, out.str());
}

struct SimOpts {
  std::string input, output, query;
  std::string measure = "cosine";
  int top_n = 10;
  double xi = 0.5;
  std::string format = "csv";
};

void run_sim(const SimOpts& opt) {
  const BipartiteGraph graph = load_graph_file(opt.input);
  const Measure measure = parse_measure(opt.measure);
  std::ostringstream out;
  if (!opt.query.empty()) {
    const auto ranked = top_k_similar(graph, opt.query, opt.top_n, measure);
    const char delim = delimiter_for(opt.format);
    out << "node" << delim << "score\n";
    for (const auto& [node, score] : ranked) {
      out << node << delim << format_double(score) << "\n";
    }
  } else {
    const SimilarityGraph simgraph = build_similarity_graph(graph, opt.xi, measure);
    save_similarity_graph(simgraph, out);
  }
  atomic_write(opt.output, out.str());
}

struct ClusterOpts {
  std::string input, output;
  double xi = 0.5;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "csv";
};

void run_cluster(const ClusterOpts& opt) {
  SimilarityGraph simgraph;
  {
    auto in = open_input(opt.input);
    std::string first_line;
    std::getline(in, first_line);
    in.seekg(0);
    if (strip_cr(first_line) == "#weight_mode=similarity") {
      simgraph = load_similarity_graph(in);
    } else {
      simgraph = build_similarity_graph(load_graph(in), opt.xi);
    }
  }
  const Clustering clustering = louvain_cluster(simgraph, opt.seed);
  const char delim = delimiter_for(opt.format);
  std::ostringstream out;
  out << "#modularity=" << format_double(clustering.modularity) << "\n";
  out << "node" << delim << "cluster\n";
  for (const auto& [node, cluster] : clustering.assignment) {
    out << node << delim << cluster << "\n";
  }
  atomic_write(opt.output, out.str());
}

struct TrendOpts {
  std::string input, topic, output;
  std::string format = "csv";
};

void run_trend(const TrendOpts& opt) {
  const BipartiteGraph graph = load_graph_file(opt.input);
  std::string topic = opt.topic;
  if (topic.rfind("c:", 0) == 0) topic = topic.substr(2);
  const TrendSeries series = topic_trend(graph, topic);
  const char delim = delimiter_for(opt.format);
  std::ostringstream out;
  out << "year" << delim << "weight" << delim << "proportion\n";
  for (const TrendPoint& point : series.points) {
    out << point.year << delim << format_weight(point.weight) << delim
        << format_double(point.proportion) << "\n";
  }
  atomic_write(opt.output, out.str());
}

struct PairsOpts {
  std::string input, theta, labels, output;
  std::string strategy = "none";
  std::string group_key = "group";
  double xi = 0.5;
  int top_k_groups = 0;  // 0 means threshold mode
  bool include_within_group = false;
  int top_n = 10;
  double min_score = 0.0;
  std::string format = "csv";
};

void run_pairs(const PairsOpts& opt) {
  const Corpus corpus = load_corpus_file(opt.input);
  const TopicModel model = load_theta_file(opt.theta);

  BlockingStrategy strategy;
  strategy.kind = parse_blocking_kind(opt.strategy);
  strategy.group_threshold = opt.xi;
  if (opt.top_k_groups > 0) strategy.top_k_group_pairs = opt.top_k_groups;
  strategy.include_within_group = opt.include_within_group;

  GroupPartition groups;
  CriteriaFamily criteria;
  BipartiteGraph graph;
  const BipartiteGraph* graph_ptr = nullptr;
  if (strategy.kind != BlockingKind::none) {
    groups = assign_groups(corpus, parse_group_key(opt.group_key));
    criteria = !opt.labels.empty() ? criteria_for(corpus, "", opt.labels)
                                   : derive_criteria(model, corpus);
    if (strategy.kind == BlockingKind::similar_groups) {
      graph = build_bipartite(groups, criteria, WeightMode::doc_count, corpus);
      graph_ptr = &graph;
    }
  }

  const BlockedPairsResult result =
      blocked_pairs(model, corpus, groups, criteria, strategy, opt.top_n, opt.min_score, graph_ptr);
  const char delim = delimiter_for(opt.format);
  std::ostringstream out;
  out << "doc_a" << delim << "doc_b" << delim << "score" << delim << "block\n";
  for (const PairResult& pair : result.pairs) {
    out << pair.doc_a << delim << pair.doc_b << delim << format_double(pair.score) << delim
        << pair.block << "\n";
  }
  atomic_write(opt.output, out.str());
}

struct EvalMapOpts {
  std::string input, judgments, output;
  int top_n = 3;
  std::string measure = "cosine";
  std::string format = "csv";
};

void run_eval_map(const EvalMapOpts& opt) {
  const BipartiteGraph graph = load_graph_file(opt.input);
  RelevanceJudgments judgments;
  {
    auto in = open_input(opt.judgments);
    judgments = load_judgments_csv(in);
  }
  for (const auto& [query, relevant] : judgments) {
    if (!graph.has_p(query)) {
      throw std::runtime_error("judged query '" + query + "' is not a group node in the graph");
    }
    for (const std::string& node : relevant) {
      if (!graph.has_p(node)) {
        throw std::runtime_error("judged node '" + node + "' is not a group node in the graph");
      }
    }
  }
  const Measure measure = parse_measure(opt.measure);
  Rankings rankings;
  for (const auto& [query, relevant] : judgments) {
    const auto ranked = top_k_similar(graph, query, opt.top_n, measure);
    std::vector<std::string> nodes;
    nodes.reserve(ranked.size());
    for (const auto& [node, score] : ranked) nodes.push_back(node);
    rankings.emplace(query, std::move(nodes));
  }
  const double map = mean_average_precision(rankings, judgments, opt.top_n);

  if (!opt.output.empty()) {
    const char delim = delimiter_for(opt.format);
    std::ostringstream out;
    out << "#map=" << format_double(map) << "\n";
    out << "query" << delim << "ap\n";
    for (const auto& [query, ranking] : rankings) {
      out << query << delim << format_double(average_precision(ranking, judgments.at(query), opt.top_n))
          << "\n";
    }
    atomic_write(opt.output, out.str());
  }
  std::cout << "MAP@" << opt.top_n << " = " << format_double(map) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"docgroup: compare groups of documents via a weighted bipartite graph of groups "
               "and topic criteria"};
  app.require_subcommand(1);

  FitOpts fit_opts;
  auto* fit = app.add_subcommand("fit", "Fit an LDA topic model and export theta as CSV");
  fit->add_option("--input", fit_opts.input, "corpus JSON-lines file")->required();
  fit->add_option("--output", fit_opts.output, "theta CSV path")->required();
  fit->add_option("--k", fit_opts.k, "number of topics")->required();
  fit->add_option("--iterations", fit_opts.iterations, "Gibbs sweeps (default 200)");
  fit->add_option("--alpha", fit_opts.alpha, "document-topic prior (default 5/k)");
  fit->add_option("--beta", fit_opts.beta, "topic-word prior (default 0.01)");
  fit->add_option("--seed", fit_opts.seed, "RNG seed")->envname("DOCGROUP_SEED");
  fit->add_option("--topic-word", fit_opts.topic_word_output, "also export the topic-word matrix");

  BuildOpts build_opts;
  auto* build = app.add_subcommand("build", "Build the bipartite group/criteria graph");
  build->add_option("--input", build_opts.input, "corpus JSON-lines file")->required();
  auto* theta_opt = build->add_option("--theta", build_opts.theta, "theta CSV (argmax criteria)");
  build->add_option("--labels", build_opts.labels, "criteria labels CSV")->excludes(theta_opt);
  build->add_option("--group-key", build_opts.group_key, "group|year")
      ->check(CLI::IsMember({"group", "year"}));
  build->add_option("--weight-mode", build_opts.weight_mode, "doc_count|amount_sum")
      ->check(CLI::IsMember({"doc_count", "amount_sum"}));
  build->add_option("--output", build_opts.output, "graph output path")->required();
  build->add_option("--format", build_opts.format, "tsv|dot|json")
      ->check(CLI::IsMember({"tsv", "dot", "json"}));

  EntropyOpts entropy_opts;
  auto* entropy = app.add_subcommand("entropy", "Rank nodes of one side by entropy");
  entropy->add_option("--input", entropy_opts.input, "graph TSV")->required();
  entropy->add_option("--side", entropy_opts.side, "P|C")->check(CLI::IsMember({"P", "C"}));
  entropy->add_option("--order", entropy_opts.order, "asc|desc")
      ->check(CLI::IsMember({"asc", "desc"}));
  entropy->add_option("--output", entropy_opts.output, "CSV output path")->required();
  entropy->add_option("--format", entropy_opts.format, "csv|tsv")
      ->check(CLI::IsMember({"csv", "tsv"}));

  SimOpts sim_opts;
  auto* sim = app.add_subcommand(
      "sim", "Query similar groups, or export the thresholded similarity graph");
  sim->add_option("--input", sim_opts.input, "graph TSV")->required();
  sim->add_option("--query", sim_opts.query, "group node to rank against (omit to export graph)");
  sim->add_option("--measure", sim_opts.measure, "cosine|weighted_jaccard|spearman")
      ->check(CLI::IsMember({"cosine", "weighted_jaccard", "spearman"}));
  sim->add_option("--top-n", sim_opts.top_n, "ranking length (query mode)");
  sim->add_option("--xi", sim_opts.xi, "similarity threshold (graph mode, default 0.5)");
  sim->add_option("--output", sim_opts.output, "output path")->required();
  sim->add_option("--format", sim_opts.format, "csv|tsv (query mode)")
      ->check(CLI::IsMember({"csv", "tsv"}));

  ClusterOpts cluster_opts;
  auto* cluster = app.add_subcommand("cluster", "Louvain clusters of the group similarity graph");
  cluster->add_option("--input", cluster_opts.input, "bipartite or similarity graph TSV")
      ->required();
  cluster->add_option("--xi", cluster_opts.xi, "similarity threshold (default 0.5)");
  cluster->add_option("--seed", cluster_opts.seed, "RNG seed")->envname("DOCGROUP_SEED");
  cluster->add_option("--output", cluster_opts.output, "CSV output path")->required();
  cluster->add_option("--format", cluster_opts.format, "csv|tsv")
      ->check(CLI::IsMember({"csv", "tsv"}));

  TrendOpts trend_opts;
  auto* trend = app.add_subcommand("trend", "Per-year weight and share of one topic");
  trend->add_option("--input", trend_opts.input, "graph TSV built with year groups")->required();
  trend->add_option("--topic", trend_opts.topic, "criterion node id (e.g. t7)")->required();
  trend->add_option("--output", trend_opts.output, "CSV output path")->required();
  trend->add_option("--format", trend_opts.format, "csv|tsv")
      ->check(CLI::IsMember({"csv", "tsv"}));

  PairsOpts pairs_opts;
  auto* pairs = app.add_subcommand("pairs", "Most similar document pairs (Hellinger similarity)");
  pairs->add_option("--input", pairs_opts.input, "corpus JSON-lines file")->required();
  pairs->add_option("--theta", pairs_opts.theta, "theta CSV")->required();
  pairs->add_option("--labels", pairs_opts.labels, "criteria labels CSV (overrides argmax)");
  pairs->add_option("--strategy", pairs_opts.strategy, "none|same_criterion|similar_groups")
      ->check(CLI::IsMember({"none", "same_criterion", "similar_groups"}));
  pairs->add_option("--group-key", pairs_opts.group_key, "group|year")
      ->check(CLI::IsMember({"group", "year"}));
  pairs->add_option("--xi", pairs_opts.xi, "group-pair similarity threshold (default 0.5)");
  pairs->add_option("--top-k-groups", pairs_opts.top_k_groups,
                    "expand the top-k most similar group pairs instead of thresholding");
  pairs->add_flag("--include-within-group", pairs_opts.include_within_group,
                  "also compare documents inside the same group (similar_groups)");
  pairs->add_option("--top-n", pairs_opts.top_n, "number of pairs to keep");
  pairs->add_option("--min-score", pairs_opts.min_score, "minimum Hellinger similarity");
  pairs->add_option("--output", pairs_opts.output, "CSV output path")->required();
  pairs->add_option("--format", pairs_opts.format, "csv|tsv")
      ->check(CLI::IsMember({"csv", "tsv"}));

  EvalMapOpts eval_opts;
  auto* eval_map = app.add_subcommand("eval-map", "Mean average precision of similarity rankings");
  eval_map->add_option("--input", eval_opts.input, "graph TSV")->required();
  eval_map->add_option("--judgments", eval_opts.judgments, "CSV query_node,relevant_node")
      ->required();
  eval_map->add_option("--top-n", eval_opts.top_n, "ranking cutoff n (default 3)");
  eval_map->add_option("--measure", eval_opts.measure, "cosine|weighted_jaccard|spearman")
      ->check(CLI::IsMember({"cosine", "weighted_jaccard", "spearman"}));
  eval_map->add_option("--output", eval_opts.output, "per-query AP CSV path");
  eval_map->add_option("--format", eval_opts.format, "csv|tsv")
      ->check(CLI::IsMember({"csv", "tsv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) run_fit(fit_opts);
    if (build->parsed()) run_build(build_opts);
    if (entropy->parsed()) run_entropy(entropy_opts);
    if (sim->parsed()) run_sim(sim_opts);
    if (cluster->parsed()) run_cluster(cluster_opts);
    if (trend->parsed()) run_trend(trend_opts);
    if (pairs->parsed()) run_pairs(pairs_opts);
    if (eval_map->parsed()) run_eval_map(eval_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
