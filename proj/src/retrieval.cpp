#include "biset/retrieval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "biset/errors.hpp"

namespace biset {

std::vector<std::string> normalize(std::string_view raw) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : raw) {
    unsigned char u = static_cast<unsigned char>(ch);
    if (std::isspace(u)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else if (std::isalpha(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    }
    // every other character is removed outright
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

std::vector<std::string> normalize_tokens(const std::vector<std::string>& toks) {
  std::vector<std::string> out;
  out.reserve(toks.size());
  for (const auto& tok : toks) {
    for (auto& sub : normalize(tok)) out.push_back(std::move(sub));
  }
  return out;
}

constexpr char kMagic[] = "BISETIDX1\n";

void write_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw DataError("index file truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  std::uint64_t len = read_u64(in);
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw DataError("index file truncated in string");
  return s;
}

}  // namespace

InvertedIndex InvertedIndex::build(const Corpus& corpus) {
  if (corpus.empty()) throw DataError("cannot build index over empty corpus");
  InvertedIndex index;
  index.doc_lengths_.assign(corpus.size(), 0);
  index.summaries_.resize(corpus.size());
  std::int64_t total_length = 0;
  bool any_tokens = false;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& pair = corpus.pairs[i];
    if (pair.id != static_cast<std::int64_t>(i)) {
      // ids are positional; the loader guarantees this for freshly loaded
      // corpora, re-check because retrieval results report ids
      throw DataError("corpus ids must be contiguous from zero");
    }
    index.summaries_[i] = pair.summary;
    auto terms = normalize_tokens(pair.article);
    index.doc_lengths_[i] = static_cast<std::int64_t>(terms.size());
    total_length += index.doc_lengths_[i];
    if (!terms.empty()) any_tokens = true;
    std::unordered_map<std::string, std::int64_t> tf;
    for (auto& term : terms) tf[std::move(term)] += 1;
    for (auto& [term, count] : tf) {
      index.postings_[term].push_back(
          {static_cast<std::int64_t>(i), count});
    }
  }
  if (!any_tokens) {
    throw DataError("every article normalized to empty; nothing to index");
  }
  for (auto& [term, postings] : index.postings_) {
    std::sort(postings.begin(), postings.end(),
              [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
  }
  index.avg_doc_length_ =
      static_cast<double>(total_length) / static_cast<double>(corpus.size());
  return index;
}

std::int64_t InvertedIndex::doc_length(std::int64_t doc) const {
  if (doc < 0 || doc >= doc_count()) throw UsageError("doc id out of range");
  return doc_lengths_[static_cast<std::size_t>(doc)];
}

std::int64_t InvertedIndex::df(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? 0
                               : static_cast<std::int64_t>(it->second.size());
}

const std::vector<Posting>* InvertedIndex::postings(
    const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& InvertedIndex::summary(std::int64_t doc) const {
  if (doc < 0 || doc >= doc_count()) throw UsageError("doc id out of range");
  return summaries_[static_cast<std::size_t>(doc)];
}

double InvertedIndex::idf(std::int64_t df) const {
  const double n = static_cast<double>(doc_count());
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

RetrievalOutcome InvertedIndex::retrieve(std::string_view raw_query,
                                         std::int64_t n,
                                         std::int64_t exclude_doc,
                                         const Bm25Params& bm25) const {
  return retrieve_tokens(normalize(raw_query), n, exclude_doc, bm25);
}

RetrievalOutcome InvertedIndex::retrieve_tokens(
    const std::vector<std::string>& query, std::int64_t n,
    std::int64_t exclude_doc, const Bm25Params& bm25) const {
  if (n < 1) throw UsageError("retrieve: n must be at least 1");
  RetrievalOutcome outcome;
  auto terms = normalize_tokens(query);
  if (terms.empty()) {
    outcome.empty_query = true;
    return outcome;
  }
  std::vector<double> scores(static_cast<std::size_t>(doc_count()), 0.0);
  for (const auto& term : terms) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double idf_t = idf(static_cast<std::int64_t>(it->second.size()));
    for (const Posting& p : it->second) {
      const double tf = static_cast<double>(p.tf);
      const double norm_len =
          static_cast<double>(doc_lengths_[static_cast<std::size_t>(p.doc)]) /
          avg_doc_length_;
      scores[static_cast<std::size_t>(p.doc)] +=
          idf_t * tf * (bm25.k1 + 1.0) /
          (tf + bm25.k1 * (1.0 - bm25.b + bm25.b * norm_len));
    }
  }
  std::vector<std::int64_t> order;
  order.reserve(scores.size());
  for (std::int64_t d = 0; d < doc_count(); ++d) {
    if (d != exclude_doc) order.push_back(d);
  }
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    double sa = scores[static_cast<std::size_t>(a)];
    double sb = scores[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    return a < b;
  });
  const std::size_t keep =
      std::min<std::size_t>(order.size(), static_cast<std::size_t>(n));
  outcome.results.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    outcome.results.push_back({order[i], scores[static_cast<std::size_t>(order[i])],
                               summaries_[static_cast<std::size_t>(order[i])]});
  }
  return outcome;
}

void InvertedIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArtifactError("cannot write index: " + path);
  out.write(kMagic, sizeof(kMagic) - 1);
  write_u64(out, static_cast<std::uint64_t>(doc_count()));
  for (std::size_t d = 0; d < doc_lengths_.size(); ++d) {
    write_u64(out, static_cast<std::uint64_t>(doc_lengths_[d]));
    write_u64(out, summaries_[d].size());
    for (const auto& tok : summaries_[d]) write_string(out, tok);
  }
  write_u64(out, postings_.size());
  for (const auto& [term, postings] : postings_) {  // std::map: sorted terms
    write_string(out, term);
    write_u64(out, postings.size());
    for (const Posting& p : postings) {
      write_u64(out, static_cast<std::uint64_t>(p.doc));
      write_u64(out, static_cast<std::uint64_t>(p.tf));
    }
  }
  if (!out) throw ArtifactError("failed writing index: " + path);
}

InvertedIndex InvertedIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open index: " + path);
  char magic[sizeof(kMagic) - 1];
  in.read(magic, sizeof(magic));
  if (!in || std::string_view(magic, sizeof(magic)) != kMagic) {
    throw DataError("bad index magic: " + path);
  }
  InvertedIndex index;
  const std::uint64_t docs = read_u64(in);
  index.doc_lengths_.resize(docs);
  index.summaries_.resize(docs);
  std::int64_t total_length = 0;
  for (std::uint64_t d = 0; d < docs; ++d) {
    index.doc_lengths_[d] = static_cast<std::int64_t>(read_u64(in));
    total_length += index.doc_lengths_[d];
    const std::uint64_t tokens = read_u64(in);
    index.summaries_[d].reserve(tokens);
    for (std::uint64_t t = 0; t < tokens; ++t) {
      index.summaries_[d].push_back(read_string(in));
    }
  }
  const std::uint64_t terms = read_u64(in);
  for (std::uint64_t t = 0; t < terms; ++t) {
    std::string term = read_string(in);
    const std::uint64_t count = read_u64(in);
    std::vector<Posting> postings(count);
    for (std::uint64_t p = 0; p < count; ++p) {
      postings[p].doc = static_cast<std::int64_t>(read_u64(in));
      postings[p].tf = static_cast<std::int64_t>(read_u64(in));
    }
    index.postings_.emplace(std::move(term), std::move(postings));
  }
  index.avg_doc_length_ = docs == 0 ? 0.0
                                    : static_cast<double>(total_length) /
                                          static_cast<double>(docs);
  return index;
}

}  // namespace biset
