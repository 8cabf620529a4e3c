#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace docgroup {

using Rankings = std::map<std::string, std::vector<std::string>>;
using RelevanceJudgments = std::map<std::string, std::set<std::string>>;

// Average precision of one ranked list, truncated at rank n and normalized
// by min(n, number of relevant items) so a perfect ranking scores 1.
double average_precision(const std::vector<std::string>& ranking,
                         const std::set<std::string>& relevant, int n);

// Mean of per-query average precisions. Every query in `rankings` must have
// a non-empty relevant set.
double mean_average_precision(const Rankings& rankings, const RelevanceJudgments& judgments, int n);

// CSV "query_node,relevant_node" with header.
RelevanceJudgments load_judgments_csv(std::istream& in);

}  // namespace docgroup
