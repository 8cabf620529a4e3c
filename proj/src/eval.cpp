#include "docgroup/eval.hpp"

#include <algorithm>
#include <istream>
#include <stdexcept>

#include "docgroup/util.hpp"

namespace docgroup {

double average_precision(const std::vector<std::string>& ranking,
                         const std::set<std::string>& relevant, int n) {
  if (n < 1) throw std::invalid_argument("average_precision: n must be positive");
  if (relevant.empty()) {
    throw std::invalid_argument("average_precision: empty relevant set");
  }
  const std::size_t cutoff = std::min(ranking.size(), static_cast<std::size_t>(n));
  int hits = 0;
  double sum = 0.0;
  for (std::size_t pos = 0; pos < cutoff; ++pos) {
    if (relevant.count(ranking[pos])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
    }
  }
  const double denom = std::min<double>(n, static_cast<double>(relevant.size()));
  return sum / denom;
}

double mean_average_precision(const Rankings& rankings, const RelevanceJudgments& judgments,
                              int n) {
  if (rankings.empty()) {
    throw std::invalid_argument("mean_average_precision: no queries");
  }
  double total = 0.0;
  for (const auto& [query, ranking] : rankings) {
    auto it = judgments.find(query);
    if (it == judgments.end() || it->second.empty()) {
      throw std::invalid_argument("mean_average_precision: query '" + query +
                                  "' has no judged-relevant nodes");
    }
    total += average_precision(ranking, it->second, n);
  }
  return total / static_cast<double>(rankings.size());
}

RelevanceJudgments load_judgments_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("judgments file is empty");
  line = strip_cr(line);
  if (split(line, ',') != std::vector<std::string>{"query_node", "relevant_node"}) {
    throw std::runtime_error("judgments file must start with header 'query_node,relevant_node'");
  }
  RelevanceJudgments judgments;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw std::runtime_error("judgments line " + std::to_string(line_no) +
                               ": expected 'query_node,relevant_node'");
    }
    judgments[fields[0]].insert(fields[1]);
  }
  if (judgments.empty()) throw std::runtime_error("judgments file has no rows");
  return judgments;
}

}  // namespace docgroup
