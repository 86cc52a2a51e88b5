#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biset/checkpoint.hpp"
#include "biset/ops.hpp"
#include "biset/rng.hpp"
#include "biset/text.hpp"

namespace biset {

struct RerankConfig {
  int embed_dim = 300;   // word embedding size d
  int kernel_width = 3;  // CNN kernel size
  int k_pool = 10;       // k of k-max pooling
  int hidden_dim = 64;   // scorer hidden width (unstated upstream)
  double dropout = 0.2;  // rate between layers (unstated upstream)
  double init_scale = 0.08;

  int batch_size = 64;
  double learning_rate = 1e-3;
  std::int64_t lr_decay_every = 10000;
  double lr_decay_factor = 0.1;
  double weight_decay = 3e-6;  // L2 over all trainable variables
  double grad_clip = 5.0;
  std::int64_t steps = 2000;
  std::uint64_t seed = 1;
};

/// CNN template scorer: a shared-weight convolution encoder block per
/// sequence, a Gaussian similarity matrix, column-max + k-max pooling, and
/// a two-layer feed-forward scorer with a sigmoid output.
class RerankModel {
 public:
  RerankModel(Vocabulary vocab, const RerankConfig& config, Rng& rng);

  /// z_i = GLU(conv(e))_i + e_i, weights shared between article and
  /// template encoders. Shape [L x d].
  Tensor encode_block(const std::vector<int>& ids, Rng* dropout_rng) const;

  /// Pooling plus feed-forward scorer over a similarity matrix; returns the
  /// pre-sigmoid logit (training wants it for a stable loss).
  Tensor pool_logit(const Tensor& sim, Rng* dropout_rng) const;

  /// Probability-space score s in (0,1) per the pooling layer equations.
  Tensor pool_and_score(const Tensor& sim) const;

  /// Full differentiable path from token ids to the score logit.
  Tensor score_logit(const std::vector<int>& article_ids,
                     const std::vector<int>& template_ids,
                     Rng* dropout_rng) const;

  /// Inference-mode score for token sequences (no dropout, no grads kept).
  double score(const TokenSeq& article, const TokenSeq& candidate) const;

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }
  const Vocabulary& vocab() const { return vocab_; }
  const RerankConfig& config() const { return config_; }

 private:
  Vocabulary vocab_;
  RerankConfig config_;
  ParamSet params_;
};

struct RerankExample {
  TokenSeq article;
  TokenSeq candidate;
  double target = 0.0;  // ROUGE-1 F1 of candidate vs gold summary
};

/// Probability-space binary cross-entropy with the 0*log(0) = 0 convention.
double binary_cross_entropy(double s, double s_star);

struct RerankTrainStats {
  std::int64_t steps = 0;
  double final_loss = 0.0;  // mean batch BCE at the last step
};

/// Minimizes mean BCE between predicted scores and soft ROUGE-1 targets with
/// Adam, elementwise gradient clipping, L2 decay, and the step-decay
/// schedule from the config. Targets outside [0,1] are a data error.
RerankTrainStats train_rerank(RerankModel& model,
                              const std::vector<RerankExample>& dataset);

/// Highest-scoring candidate; ties break to the lowest index.
std::pair<int, double> best_template(const TokenSeq& article,
                                     const std::vector<TokenSeq>& candidates,
                                     const RerankModel& model);

/// NDCG@k with linear gain: DCG = sum rel(order[i]) / log2(i + 2). A zero
/// ideal DCG scores 1 by convention.
double ndcg_at_k(std::span<const int> predicted_order,
                 std::span<const double> relevances, int k);

}  // namespace biset
