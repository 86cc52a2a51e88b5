#include "biset/text.hpp"

#include <cctype>
#include <fstream>

#include "biset/errors.hpp"

namespace biset {

std::vector<std::string> model_tokens(std::string_view line) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : line) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArtifactError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

Corpus load_corpus(const std::string& article_path,
                   const std::string& summary_path) {
  auto article_lines = read_lines(article_path);
  auto summary_lines = read_lines(summary_path);
  if (article_lines.size() != summary_lines.size()) {
    throw DataError("line count mismatch: " + article_path + " has " +
                    std::to_string(article_lines.size()) + " lines, " +
                    summary_path + " has " +
                    std::to_string(summary_lines.size()));
  }
  Corpus corpus;
  for (std::size_t i = 0; i < article_lines.size(); ++i) {
    ArticleSummaryPair pair;
    pair.article = model_tokens(article_lines[i]);
    pair.summary = model_tokens(summary_lines[i]);
    if (pair.article.empty() || pair.summary.empty()) {
      corpus.dropped_pairs += 1;
      continue;
    }
    // ids are contiguous over kept pairs; they double as index doc ids
    pair.id = static_cast<std::int64_t>(corpus.pairs.size());
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

Vocabulary::Vocabulary() {
  add("<pad>");
  add("<unk>");
  add("<bos>");
  add("<eos>");
}

Vocabulary Vocabulary::build(const Corpus& corpus) {
  Vocabulary vocab;
  for (const auto& pair : corpus.pairs) {
    for (const auto& tok : pair.article) vocab.add(tok);
    for (const auto& tok : pair.summary) vocab.add(tok);
  }
  return vocab;
}

void Vocabulary::add(const std::string& token) {
  if (index_.emplace(token, static_cast<int>(tokens_.size())).second) {
    tokens_.push_back(token);
  }
}

int Vocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw UsageError("vocabulary id out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::ids(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) out.push_back(id(tok));
  return out;
}

std::vector<std::string> Vocabulary::tokens(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(token(i));
  return out;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArtifactError("cannot write vocabulary: " + path);
  for (const auto& tok : tokens_) out << tok << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArtifactError("cannot open vocabulary: " + path);
  Vocabulary vocab;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    if (line_no >= 4) vocab.add(line);  // first four lines are the reserved ids
    ++line_no;
  }
  if (line_no < 4) throw DataError("vocabulary file truncated: " + path);
  return vocab;
}

}  // namespace biset
