#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "biset/text.hpp"

namespace biset {

/// Retrieval-side normalization: lowercase, drop every character outside
/// [a-z] and whitespace, split on whitespace, drop empty tokens. Digit
/// masks ('#.#') vanish entirely for matching purposes.
std::vector<std::string> normalize(std::string_view raw);

struct Posting {
  std::int64_t doc = 0;
  std::int64_t tf = 0;
  bool operator==(const Posting&) const = default;
};

struct RetrievalResult {
  std::int64_t doc = 0;
  double score = 0.0;
  std::vector<std::string> template_tokens;  // summary of the matched article
};

struct RetrievalOutcome {
  std::vector<RetrievalResult> results;
  bool empty_query = false;  // query normalized to nothing; results empty
};

/// BM25 constants (Lucene defaults).
struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Term -> postings index over normalized training articles. Immutable once
/// built; queries are safe from any number of threads.
class InvertedIndex {
 public:
  static InvertedIndex build(const Corpus& corpus);

  std::int64_t doc_count() const { return static_cast<std::int64_t>(doc_lengths_.size()); }
  double avg_doc_length() const { return avg_doc_length_; }
  std::int64_t doc_length(std::int64_t doc) const;
  std::int64_t df(const std::string& term) const;
  const std::vector<Posting>* postings(const std::string& term) const;
  const std::vector<std::string>& summary(std::int64_t doc) const;

  /// idf(term) = ln(1 + (N - df + 0.5) / (df + 0.5)).
  double idf(std::int64_t df) const;

  /// BM25 top-n. Every document is scored (query terms absent everywhere
  /// contribute nothing); ordering is score descending, ties by ascending
  /// doc id. `exclude_doc` removes one id from consideration (used when the
  /// query article itself is part of the indexed corpus).
  RetrievalOutcome retrieve(std::string_view raw_query, std::int64_t n,
                            std::int64_t exclude_doc = -1,
                            const Bm25Params& bm25 = {}) const;
  RetrievalOutcome retrieve_tokens(const std::vector<std::string>& query,
                                   std::int64_t n,
                                   std::int64_t exclude_doc = -1,
                                   const Bm25Params& bm25 = {}) const;

  /// File layout: magic "BISETIDX1\n", then little-endian 64-bit counts and
  /// UTF-8 length-prefixed strings in a fixed order; re-saving a loaded
  /// index reproduces the file bit for bit.
  void save(const std::string& path) const;
  static InvertedIndex load(const std::string& path);

  bool operator==(const InvertedIndex&) const = default;

 private:
  std::map<std::string, std::vector<Posting>> postings_;  // sorted terms
  std::vector<std::int64_t> doc_lengths_;
  std::vector<std::vector<std::string>> summaries_;
  double avg_doc_length_ = 0.0;
};

}  // namespace biset
