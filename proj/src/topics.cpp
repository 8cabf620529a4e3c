#include "docgroup/topics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "docgroup/util.hpp"

namespace docgroup {

TopicModel fit_lda(const Corpus& corpus, int k, int iterations, double alpha, double beta,
                   std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("fit_lda: k must be >= 2");
  if (iterations < 1) throw std::invalid_argument("fit_lda: iterations must be positive");
  if (alpha <= 0 || beta <= 0) throw std::invalid_argument("fit_lda: alpha and beta must be positive");

  const auto doc_indices = corpus.modelable_indices();
  if (doc_indices.empty()) {
    throw std::runtime_error("fit_lda: corpus has no modelable documents");
  }
  if (doc_indices.size() < static_cast<std::size_t>(k)) {
    std::cerr << "warning: corpus has " << doc_indices.size() << " modelable documents, fewer than k="
              << k << "\n";
  }
  const int n_docs = static_cast<int>(doc_indices.size());
  const int n_words = static_cast<int>(corpus.vocabulary.size());

  // Token stream as vocabulary indices, one vector per modelable document.
  std::vector<std::vector<int>> docs(n_docs);
  for (int d = 0; d < n_docs; ++d) {
    const Document& doc = corpus.documents[doc_indices[d]];
    docs[d].reserve(doc.tokens.size());
    for (const std::string& token : doc.tokens) {
      docs[d].push_back(corpus.vocab_index.at(token));
    }
  }

  std::vector<std::vector<int>> assignment(n_docs);
  std::vector<std::vector<int>> n_dk(n_docs, std::vector<int>(k, 0));
  std::vector<std::vector<int>> n_kw(k, std::vector<int>(n_words, 0));
  std::vector<int> n_k(k, 0);

  Rng rng(seed);
  for (int d = 0; d < n_docs; ++d) {
    assignment[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      int topic = static_cast<int>(rng.next_index(static_cast<std::size_t>(k)));
      assignment[d][i] = topic;
      ++n_dk[d][topic];
      ++n_kw[topic][docs[d][i]];
      ++n_k[topic];
    }
  }

  const double v_beta = n_words * beta;
  std::vector<double> weight(k);
  for (int sweep = 0; sweep < iterations; ++sweep) {
    for (int d = 0; d < n_docs; ++d) {
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const int word = docs[d][i];
        const int old_topic = assignment[d][i];
        --n_dk[d][old_topic];
        --n_kw[old_topic][word];
        --n_k[old_topic];

        double total = 0.0;
        for (int t = 0; t < k; ++t) {
          weight[t] = (n_dk[d][t] + alpha) * (n_kw[t][word] + beta) / (n_k[t] + v_beta);
          total += weight[t];
        }
        double r = rng.next_double() * total;
        int new_topic = k - 1;
        for (int t = 0; t < k; ++t) {
          r -= weight[t];
          if (r < 0) {
            new_topic = t;
            break;
          }
        }

        assignment[d][i] = new_topic;
        ++n_dk[d][new_topic];
        ++n_kw[new_topic][word];
        ++n_k[new_topic];
      }
    }
  }

  TopicModel model;
  model.k = k;
  model.alpha = alpha;
  model.beta = beta;
  model.iterations = iterations;
  model.seed = seed;
  model.vocabulary = corpus.vocabulary;
  model.doc_ids.reserve(n_docs);
  for (int d = 0; d < n_docs; ++d) {
    model.doc_ids.push_back(corpus.documents[doc_indices[d]].doc_id);
  }
  model.theta.assign(n_docs, std::vector<double>(k));
  for (int d = 0; d < n_docs; ++d) {
    const double denom = static_cast<double>(docs[d].size()) + k * alpha;
    for (int t = 0; t < k; ++t) {
      model.theta[d][t] = (n_dk[d][t] + alpha) / denom;
    }
  }
  model.topic_word.assign(k, std::vector<double>(n_words));
  for (int t = 0; t < k; ++t) {
    const double denom = n_k[t] + v_beta;
    for (int w = 0; w < n_words; ++w) {
      model.topic_word[t][w] = (n_kw[t][w] + beta) / denom;
    }
  }
  return model;
}

CriteriaFamily derive_criteria(const TopicModel& model, const Corpus& corpus) {
  const auto doc_indices = corpus.modelable_indices();
  if (model.theta.size() != doc_indices.size()) {
    throw std::runtime_error("derive_criteria: model has " + std::to_string(model.theta.size()) +
                             " rows but corpus has " + std::to_string(doc_indices.size()) +
                             " modelable documents");
  }
  for (std::size_t d = 0; d < doc_indices.size(); ++d) {
    if (model.doc_ids[d] != corpus.documents[doc_indices[d]].doc_id) {
      throw std::runtime_error("derive_criteria: row " + std::to_string(d + 1) + " is '" +
                               model.doc_ids[d] + "' but corpus has '" +
                               corpus.documents[doc_indices[d]].doc_id + "'");
    }
  }

  CriteriaFamily family;
  for (std::size_t d = 0; d < model.theta.size(); ++d) {
    const auto& row = model.theta[d];
    int best = 0;
    for (int t = 1; t < model.k; ++t) {
      if (row[t] > row[best]) best = t;
    }
    family.criteria["t" + std::to_string(best + 1)].insert(model.doc_ids[d]);
  }
  family.is_partition = true;  // over the modelable documents
  return family;
}

TopicLabel topic_top_words(const TopicModel& model, int topic_id, int n) {
  if (topic_id < 1 || topic_id > model.k) {
    throw std::invalid_argument("topic_top_words: topic_id " + std::to_string(topic_id) +
                                " out of range 1.." + std::to_string(model.k));
  }
  if (n < 1) throw std::invalid_argument("topic_top_words: n must be positive");
  if (model.topic_word.empty()) {
    throw std::runtime_error("topic_top_words: model carries no topic-word matrix");
  }
  const auto& row = model.topic_word[topic_id - 1];
  std::vector<int> order(row.size());
  for (std::size_t w = 0; w < row.size(); ++w) order[w] = static_cast<int>(w);
  std::stable_sort(order.begin(), order.end(),
                   [&row](int a, int b) { return row[a] > row[b]; });

  TopicLabel label;
  label.topic_id = topic_id;
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(n), row.size());
  label.top_words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    label.top_words.emplace_back(model.vocabulary[order[i]], row[order[i]]);
  }
  return label;
}

void save_theta(const TopicModel& model, std::ostream& out) {
  out << "doc_id";
  for (int t = 1; t <= model.k; ++t) out << ",t" << t;
  out << "\n";
  for (std::size_t d = 0; d < model.theta.size(); ++d) {
    out << model.doc_ids[d];
    for (double v : model.theta[d]) out << ',' << format_double(v);
    out << "\n";
  }
}

TopicModel load_theta(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("theta file is empty");
  line = strip_cr(line);
  auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "doc_id") {
    throw std::runtime_error("theta file must start with header 'doc_id,t1,...'");
  }
  for (std::size_t t = 1; t < header.size(); ++t) {
    if (header[t] != "t" + std::to_string(t)) {
      throw std::runtime_error("theta header column " + std::to_string(t + 1) +
                               " should be 't" + std::to_string(t) + "'");
    }
  }

  TopicModel model;
  model.k = static_cast<int>(header.size()) - 1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw std::runtime_error("theta line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    std::vector<double> row(model.k);
    double sum = 0.0;
    for (int t = 0; t < model.k; ++t) {
      if (!parse_double(fields[t + 1], row[t]) || row[t] < 0) {
        throw std::runtime_error("theta line " + std::to_string(line_no) +
                                 ": invalid probability '" + fields[t + 1] + "'");
      }
      sum += row[t];
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw std::runtime_error("theta line " + std::to_string(line_no) +
                               ": row does not sum to 1 (sum=" + format_double(sum) + ")");
    }
    model.doc_ids.push_back(fields[0]);
    model.theta.push_back(std::move(row));
  }
  if (model.theta.empty()) throw std::runtime_error("theta file has no rows");
  return model;
}

void save_topic_word(const TopicModel& model, std::ostream& out) {
  if (model.topic_word.empty()) {
    throw std::runtime_error("save_topic_word: model carries no topic-word matrix");
  }
  const std::size_t n_words = model.topic_word[0].size();
  out << "topic_id";
  for (std::size_t w = 1; w <= n_words; ++w) out << ",w" << w;
  out << "\n";
  for (int t = 0; t < model.k; ++t) {
    out << 't' << (t + 1);
    for (double v : model.topic_word[t]) out << ',' << format_double(v);
    out << "\n";
  }
}

}  // namespace docgroup
