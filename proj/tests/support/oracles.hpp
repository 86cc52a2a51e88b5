#pragma once

// Independent brute-force references used to cross-check the library. These
// deliberately avoid the production code paths: statistics are recomputed
// from raw token lists and selections are done with full sorts or explicit
// recursion.

#include <cstdint>
#include <string>
#include <vector>

#include "biset/retrieval.hpp"
#include "biset/text.hpp"

namespace oracles {

/// BM25 over every document, recomputing tf/df from the normalized article
/// token lists. Returns one score per doc id.
std::vector<double> bm25_all_docs(const biset::Corpus& corpus,
                                  const std::vector<std::string>& raw_query_tokens,
                                  double k1 = 1.2, double b = 0.75);

/// Clipped n-gram overlap via sorted-multiset intersection.
double ngram_f1(const std::vector<std::string>& candidate,
                const std::vector<std::string>& reference, int n);

/// LCS length via memoized top-down recursion.
long lcs_length(const std::vector<std::string>& a,
                const std::vector<std::string>& b);

/// Column-wise max then k-max pooling, all via full sorts on plain doubles.
std::vector<double> pool_columns(const std::vector<std::vector<double>>& sim,
                                 int k);

}  // namespace oracles
