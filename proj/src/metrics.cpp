#include "biset/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "biset/errors.hpp"

namespace biset {

namespace {

double f_measure(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference,
                   int n) {
  if (n < 1) throw UsageError("rouge_n: n must be at least 1");
  const std::size_t un = static_cast<std::size_t>(n);
  if (candidate.size() < un || reference.size() < un) return {};

  auto ngrams = [un](const TokenSeq& tokens) {
    std::map<std::vector<std::string>, long> counts;
    for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
      counts[{tokens.begin() + static_cast<long>(i),
              tokens.begin() + static_cast<long>(i + un)}] += 1;
    }
    return counts;
  };

  auto cand = ngrams(candidate);
  auto ref = ngrams(reference);
  long matched = 0, cand_total = 0, ref_total = 0;
  for (const auto& [gram, count] : cand) {
    cand_total += count;
    auto it = ref.find(gram);
    if (it != ref.end()) matched += std::min(count, it->second);
  }
  for (const auto& [gram, count] : ref) ref_total += count;

  RougeScore score;
  score.precision = static_cast<double>(matched) / cand_total;
  score.recall = static_cast<double>(matched) / ref_total;
  score.f1 = f_measure(score.precision, score.recall);
  return score;
}

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference,
                   const RougeLOptions& opts) {
  if (candidate.empty() || reference.empty()) return {};
  const std::size_t m = candidate.size(), n = reference.size();

  if (!opts.weighted) {
    std::vector<std::vector<long>> dp(m + 1, std::vector<long>(n + 1, 0));
    for (std::size_t i = 1; i <= m; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        dp[i][j] = candidate[i - 1] == reference[j - 1]
                       ? dp[i - 1][j - 1] + 1
                       : std::max(dp[i - 1][j], dp[i][j - 1]);
      }
    }
    RougeScore score;
    score.precision = static_cast<double>(dp[m][n]) / static_cast<double>(m);
    score.recall = static_cast<double>(dp[m][n]) / static_cast<double>(n);
    score.f1 = f_measure(score.precision, score.recall);
    return score;
  }

  // Weighted LCS credits consecutive runs with f(k) = k^weight; scores are
  // mapped back through the inverse f^-1(x) = x^(1/weight).
  const double w = opts.weight;
  auto f = [w](double k) { return std::pow(k, w); };
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
  std::vector<std::vector<double>> run(m + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (candidate[i - 1] == reference[j - 1]) {
        const double k = run[i - 1][j - 1];
        c[i][j] = c[i - 1][j - 1] + f(k + 1) - f(k);
        run[i][j] = k + 1;
      } else {
        c[i][j] = std::max(c[i - 1][j], c[i][j - 1]);
        run[i][j] = 0.0;
      }
    }
  }
  RougeScore score;
  score.precision = std::pow(c[m][n] / f(static_cast<double>(m)), 1.0 / w);
  score.recall = std::pow(c[m][n] / f(static_cast<double>(n)), 1.0 / w);
  score.f1 = f_measure(score.precision, score.recall);
  return score;
}

RougeReport corpus_report(const std::vector<TokenSeq>& candidates,
                          const std::vector<TokenSeq>& references) {
  if (candidates.size() != references.size()) {
    throw UsageError("corpus_report: " + std::to_string(candidates.size()) +
                     " candidates vs " + std::to_string(references.size()) +
                     " references");
  }
  if (candidates.empty()) throw UsageError("corpus_report: empty input");
  RougeReport report;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    report.rouge1 += rouge_n(candidates[i], references[i], 1).f1;
    report.rouge2 += rouge_n(candidates[i], references[i], 2).f1;
    report.rouge_l += rouge_l(candidates[i], references[i]).f1;
  }
  const double scale = 100.0 / static_cast<double>(candidates.size());
  report.rouge1 *= scale;
  report.rouge2 *= scale;
  report.rouge_l *= scale;
  return report;
}

std::string format_report(const RougeReport& report) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%8.2f %8.2f %8.2f", report.rouge1,
                report.rouge2, report.rouge_l);
  return buf;
}

}  // namespace biset
