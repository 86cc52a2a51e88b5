#include <string>
#include <vector>

#include "biset/metrics.hpp"
#include "biset/rng.hpp"
#include "biset/text.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using biset::TokenSeq;

namespace {

TokenSeq toks(const char* line) { return biset::model_tokens(line); }

TokenSeq random_seq(biset::Rng& rng, int max_len, int vocab) {
  TokenSeq out;
  const int len = static_cast<int>(rng.uniform_int(0, max_len));
  for (int i = 0; i < len; ++i) {
    out.push_back(std::string(1, static_cast<char>('a' + rng.uniform_int(0, vocab - 1))));
  }
  return out;
}

}  // namespace

TEST_CASE("rouge_n hand examples") {
  CHECK(biset::rouge_n(toks("x y z"), toks("x y z"), 1).f1 == 1.0);

  auto r1 = biset::rouge_n(toks("a b c"), toks("a b d"), 1);
  CHECK(r1.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r1.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r1.f1 == doctest::Approx(2.0 / 3.0));

  auto r2 = biset::rouge_n(toks("a b c"), toks("a b d"), 2);
  CHECK(r2.f1 == doctest::Approx(0.5));

  CHECK(biset::rouge_n(toks("a"), toks("a b"), 2).f1 == 0.0);  // too short
  CHECK_THROWS_AS(biset::rouge_n(toks("a"), toks("a"), 0), biset::UsageError);
}

TEST_CASE("rouge_l hand examples") {
  CHECK(biset::rouge_l(toks("p q r"), toks("p q r")).f1 == 1.0);

  auto score = biset::rouge_l(toks("a x b"), toks("a b"));
  CHECK(score.precision == doctest::Approx(2.0 / 3.0));
  CHECK(score.recall == doctest::Approx(1.0));
  CHECK(score.f1 == doctest::Approx(0.8));

  CHECK(biset::rouge_l(toks("a b c"), toks("x y z")).f1 == 0.0);
}

TEST_CASE("rouge matches brute-force oracles on random pairs") {
  biset::Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    auto cand = random_seq(rng, 12, 4);
    auto ref = random_seq(rng, 12, 4);
    for (int n = 1; n <= 2; ++n) {
      CHECK(biset::rouge_n(cand, ref, n).f1 == oracles::ngram_f1(cand, ref, n));
    }
    auto rl = biset::rouge_l(cand, ref);
    const long lcs = oracles::lcs_length(cand, ref);
    if (!cand.empty() && !ref.empty()) {
      CHECK(rl.precision ==
            static_cast<double>(lcs) / static_cast<double>(cand.size()));
      CHECK(rl.recall ==
            static_cast<double>(lcs) / static_cast<double>(ref.size()));
    } else {
      CHECK(rl.f1 == 0.0);
    }
    // Swapping arguments swaps precision and recall.
    auto swapped = biset::rouge_l(ref, cand);
    CHECK(rl.precision == swapped.recall);
    CHECK(rl.recall == swapped.precision);
    CHECK(rl.f1 >= 0.0);
    CHECK(rl.f1 <= 1.0);
  }
}

TEST_CASE("weighted LCS compatibility mode") {
  biset::RougeLOptions weighted{.weighted = true, .weight = 1.2};
  biset::RougeLOptions unit{.weighted = true, .weight = 1.0};
  biset::Rng rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    auto cand = random_seq(rng, 10, 3);
    auto ref = random_seq(rng, 10, 3);
    if (cand.empty() || ref.empty()) continue;
    auto w = biset::rouge_l(cand, ref, weighted);
    CHECK(w.f1 >= 0.0);
    CHECK(w.f1 <= 1.0);
    // weight 1.0 degenerates to the plain LCS scores
    auto u = biset::rouge_l(cand, ref, unit);
    auto plain = biset::rouge_l(cand, ref);
    CHECK(u.f1 == doctest::Approx(plain.f1).epsilon(1e-12));
  }
  // consecutive matches are worth more than scattered ones under -w 1.2
  auto consecutive = biset::rouge_l(toks("a b c d"), toks("a b x y"), weighted);
  auto scattered = biset::rouge_l(toks("a x b y"), toks("a p b q"), weighted);
  CHECK(consecutive.f1 > scattered.f1);
}

TEST_CASE("corpus_report averages per-pair F1 on the percent scale") {
  std::vector<TokenSeq> refs = {toks("a b"), toks("c d")};
  auto perfect = biset::corpus_report(refs, refs);
  CHECK(perfect.rouge1 == 100.0);
  CHECK(perfect.rouge2 == 100.0);
  CHECK(perfect.rouge_l == 100.0);

  std::vector<TokenSeq> half = {toks("a b"), toks("x y")};
  auto mixed = biset::corpus_report(half, refs);
  CHECK(mixed.rouge1 == 50.0);

  CHECK_THROWS_AS(biset::corpus_report({toks("a")}, refs), biset::UsageError);

  CHECK(biset::format_report(perfect) ==
        std::string("  100.00   100.00   100.00"));
}

TEST_CASE("published example pairs score strictly between 0 and 100") {
  std::vector<TokenSeq> candidates = {
      toks("factory orders up #.# percent in September."),
      toks("#.# billions around world expected to watch World Cup."),
  };
  std::vector<TokenSeq> references = {
      toks("September factory orders up #.# percent."),
      toks("#.# billion tv viewers expected for opening World Cup match."),
  };
  auto report = biset::corpus_report(candidates, references);
  CHECK(report.rouge1 > 0.0);
  CHECK(report.rouge1 < 100.0);
  CHECK(report.rouge2 > 0.0);
  CHECK(report.rouge2 < 100.0);
  CHECK(report.rouge_l > 0.0);
  CHECK(report.rouge_l < 100.0);
}
