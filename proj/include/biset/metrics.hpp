#pragma once

#include <string>
#include <vector>

namespace biset {

using TokenSeq = std::vector<std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Clipped n-gram overlap F1. Sequences shorter than n score zero.
RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference,
                   int n);

struct RougeLOptions {
  /// Weighted LCS compatibility mode for the official script's "-w 1.2"
  /// option; the plain-token unweighted LCS is the default contract.
  bool weighted = false;
  double weight = 1.2;
};

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference,
                   const RougeLOptions& opts = {});

struct RougeReport {
  double rouge1 = 0.0;  // percent scale
  double rouge2 = 0.0;
  double rouge_l = 0.0;
};

/// Arithmetic mean of per-pair F1 scores on the percent scale.
RougeReport corpus_report(const std::vector<TokenSeq>& candidates,
                          const std::vector<TokenSeq>& references);

/// Three-column table row matching "ROUGE-1 ROUGE-2 ROUGE-L", two decimals.
std::string format_report(const RougeReport& report);

}  // namespace biset
