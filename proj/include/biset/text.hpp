#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace biset {

struct ArticleSummaryPair {
  std::int64_t id = 0;
  std::vector<std::string> article;
  std::vector<std::string> summary;
};

struct Corpus {
  std::vector<ArticleSummaryPair> pairs;
  std::int64_t dropped_pairs = 0;  // lines skipped because one side was empty

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

/// Model-facing tokenization: lowercase, split on whitespace. Digit masks
/// ('#', '#.#') and punctuation survive as tokens.
std::vector<std::string> model_tokens(std::string_view line);

/// Loads parallel line-aligned article/summary files. Ids are 0-based line
/// numbers. Pairs with an empty side after tokenization are dropped and
/// counted; mismatched line counts raise a data error naming both counts.
Corpus load_corpus(const std::string& article_path,
                   const std::string& summary_path);

/// Token <-> id map with reserved entries. Built deterministically by first
/// occurrence over articles then summaries, pair by pair.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;

  Vocabulary();

  static Vocabulary build(const Corpus& corpus);

  /// Id of a token, kUnk when out of vocabulary.
  int id(const std::string& token) const;
  const std::string& token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }

  std::vector<int> ids(const std::vector<std::string>& tokens) const;
  std::vector<std::string> tokens(const std::vector<int>& ids) const;

  /// Plain-text sidecar (one token per line, line number = id) kept next to
  /// checkpoints so inference can rebuild the same mapping.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  void add(const std::string& token);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace biset
