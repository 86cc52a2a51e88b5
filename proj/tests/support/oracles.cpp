#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace oracles {

std::vector<double> bm25_all_docs(
    const biset::Corpus& corpus,
    const std::vector<std::string>& raw_query_tokens, double k1, double b) {
  // Normalize every article from scratch.
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const auto& pair : corpus.pairs) {
    std::vector<std::string> terms;
    for (const auto& tok : pair.article) {
      for (auto& sub : biset::normalize(tok)) terms.push_back(std::move(sub));
    }
    docs.push_back(std::move(terms));
  }
  std::vector<std::string> query;
  for (const auto& tok : raw_query_tokens) {
    for (auto& sub : biset::normalize(tok)) query.push_back(std::move(sub));
  }

  double total_len = 0;
  for (const auto& d : docs) total_len += static_cast<double>(d.size());
  const double avg_len = total_len / static_cast<double>(docs.size());
  const double n_docs = static_cast<double>(docs.size());

  auto term_count = [](const std::vector<std::string>& doc,
                       const std::string& term) {
    return static_cast<double>(std::count(doc.begin(), doc.end(), term));
  };

  std::vector<double> scores(docs.size(), 0.0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& term : query) {
      const double tf = term_count(docs[d], term);
      if (tf == 0.0) continue;
      double df = 0;
      for (const auto& other : docs) {
        if (std::find(other.begin(), other.end(), term) != other.end()) df += 1;
      }
      const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
      const double norm = static_cast<double>(docs[d].size()) / avg_len;
      scores[d] += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
    }
  }
  return scores;
}

double ngram_f1(const std::vector<std::string>& candidate,
                const std::vector<std::string>& reference, int n) {
  const std::size_t un = static_cast<std::size_t>(n);
  if (candidate.size() < un || reference.size() < un) return 0.0;
  auto grams = [un](const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
      std::string joined;
      for (std::size_t j = 0; j < un; ++j) {
        joined += tokens[i + j];
        joined.push_back('\x1f');
      }
      out.push_back(std::move(joined));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto cand = grams(candidate);
  auto ref = grams(reference);
  std::vector<std::string> both;
  std::set_intersection(cand.begin(), cand.end(), ref.begin(), ref.end(),
                        std::back_inserter(both));
  const double matched = static_cast<double>(both.size());
  const double p = matched / static_cast<double>(cand.size());
  const double r = matched / static_cast<double>(ref.size());
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

long lcs_length(const std::vector<std::string>& a,
                const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, long> memo;
  std::function<long(std::size_t, std::size_t)> go =
      [&](std::size_t i, std::size_t j) -> long {
    if (i == a.size() || j == b.size()) return 0;
    auto key = std::make_pair(i, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long best;
    if (a[i] == b[j]) {
      best = 1 + go(i + 1, j + 1);
    } else {
      best = std::max(go(i + 1, j), go(i, j + 1));
    }
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

std::vector<double> pool_columns(const std::vector<std::vector<double>>& sim,
                                 int k) {
  const std::size_t cols = sim.front().size();
  std::vector<double> q(std::max<std::size_t>(cols, static_cast<std::size_t>(k)),
                        0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    double best = sim[0][j];
    for (const auto& row : sim) best = std::max(best, row[j]);
    q[j] = best;
  }
  std::vector<std::size_t> idx(q.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return q[a] > q[b]; });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  std::vector<double> p;
  p.reserve(idx.size());
  for (std::size_t i : idx) p.push_back(q[i]);
  return p;
}

}  // namespace oracles
