#include "biset/rerank.hpp"

#include <algorithm>
#include <cmath>

#include "biset/optim.hpp"

namespace biset {

RerankModel::RerankModel(Vocabulary vocab, const RerankConfig& config,
                         Rng& rng)
    : vocab_(std::move(vocab)), config_(config) {
  if (config.embed_dim < 1 || config.kernel_width < 1 || config.k_pool < 1 ||
      config.hidden_dim < 1) {
    throw ConfigError("rerank: dimensions must be positive");
  }
  if (config.kernel_width % 2 == 0) {
    throw ConfigError("rerank: kernel width must be odd");
  }
  const int d = config.embed_dim;
  const double s = config.init_scale;
  auto init = [&](Eigen::Index r, Eigen::Index c) {
    return Tensor::from_matrix(rng.uniform_matrix(r, c, -s, s), true);
  };
  params_.add("embed", init(vocab_.size(), d));
  params_.add("conv.kernel", init(2 * d, config.kernel_width * d));
  params_.add("conv.bias",
              Tensor::from_vector(rng.uniform_vector(2 * d, -s, s), true));
  params_.add("scorer.w_a", init(config.hidden_dim, config.k_pool));
  params_.add("scorer.b_1",
              Tensor::from_vector(rng.uniform_vector(config.hidden_dim, -s, s),
                                  true));
  params_.add("scorer.w_s", init(1, config.hidden_dim));
  params_.add("scorer.b_2",
              Tensor::from_vector(rng.uniform_vector(1, -s, s), true));
}

Tensor RerankModel::encode_block(const std::vector<int>& ids,
                                 Rng* dropout_rng) const {
  require_shape(!ids.empty(), "encode_block: empty token sequence");
  Tensor e = lookup_rows(params_.at("embed"), ids);
  if (dropout_rng != nullptr) {
    e = dropout(e, config_.dropout, dropout_rng->engine(), true);
  }
  Tensor h = conv1d_ngram(e, params_.at("conv.kernel"),
                          params_.at("conv.bias"), config_.kernel_width);
  return add(glu(h), e);
}

Tensor RerankModel::pool_logit(const Tensor& sim, Rng* dropout_rng) const {
  Tensor q = colwise_max(sim);
  Tensor p = kmax(q, config_.k_pool);
  Tensor a = relu(add(matmul(params_.at("scorer.w_a"), p),
                      params_.at("scorer.b_1")));
  if (dropout_rng != nullptr) {
    a = dropout(a, config_.dropout, dropout_rng->engine(), true);
  }
  return add(matmul(params_.at("scorer.w_s"), a), params_.at("scorer.b_2"));
}

Tensor RerankModel::pool_and_score(const Tensor& sim) const {
  return sigmoid(pool_logit(sim, nullptr));
}

Tensor RerankModel::score_logit(const std::vector<int>& article_ids,
                                const std::vector<int>& template_ids,
                                Rng* dropout_rng) const {
  Tensor article = encode_block(article_ids, dropout_rng);
  Tensor candidate = encode_block(template_ids, dropout_rng);
  return pool_logit(gaussian_similarity(article, candidate), dropout_rng);
}

double RerankModel::score(const TokenSeq& article,
                          const TokenSeq& candidate) const {
  Tensor logit = score_logit(vocab_.ids(article), vocab_.ids(candidate),
                             nullptr);
  return 1.0 / (1.0 + std::exp(-logit.item()));
}

double binary_cross_entropy(double s, double s_star) {
  auto term = [](double weight, double prob) {
    return weight == 0.0 ? 0.0 : weight * std::log(prob);
  };
  return -(term(s_star, s) + term(1.0 - s_star, 1.0 - s));
}

RerankTrainStats train_rerank(RerankModel& model,
                              const std::vector<RerankExample>& dataset) {
  if (dataset.empty()) throw DataError("train_rerank: empty dataset");
  for (const auto& ex : dataset) {
    if (ex.target < 0.0 || ex.target > 1.0) {
      throw DataError("train_rerank: target outside [0,1]");
    }
  }
  const RerankConfig& cfg = model.config();
  Rng batches(cfg.seed);
  Rng masks = batches.fork(1);

  std::vector<std::size_t> order = batches.permutation(dataset.size());
  std::size_t cursor = 0;
  auto next_example = [&]() -> const RerankExample& {
    if (cursor == order.size()) {
      order = batches.permutation(dataset.size());
      cursor = 0;
    }
    return dataset[order[cursor++]];
  };

  AdamState state;
  RerankTrainStats stats;
  auto params = std::span<Tensor>(model.params().all());
  for (std::int64_t step = 0; step < cfg.steps; ++step) {
    std::vector<Tensor> losses;
    losses.reserve(static_cast<std::size_t>(cfg.batch_size));
    for (int b = 0; b < cfg.batch_size; ++b) {
      const RerankExample& ex = next_example();
      Tensor logit = model.score_logit(model.vocab().ids(ex.article),
                                       model.vocab().ids(ex.candidate),
                                       &masks);
      losses.push_back(bce_with_logits(logit, ex.target));
    }
    Tensor loss = scale(sum(vstack(losses)), 1.0 / cfg.batch_size);
    stats.final_loss = loss.item();
    backward_release(loss);
    clip_and_adam_step(params, state, rerank_lr(cfg.learning_rate, step,
                                                cfg.lr_decay_every,
                                                cfg.lr_decay_factor),
                       cfg.weight_decay, -cfg.grad_clip, cfg.grad_clip);
    zero_grads(params);
    stats.steps = step + 1;
  }
  return stats;
}

std::pair<int, double> best_template(const TokenSeq& article,
                                     const std::vector<TokenSeq>& candidates,
                                     const RerankModel& model) {
  if (candidates.empty()) throw UsageError("best_template: no candidates");
  int best = 0;
  double best_score = model.score(article, candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double s = model.score(article, candidates[i]);
    if (s > best_score) {
      best = static_cast<int>(i);
      best_score = s;
    }
  }
  return {best, best_score};
}

double ndcg_at_k(std::span<const int> predicted_order,
                 std::span<const double> relevances, int k) {
  if (k < 1) throw UsageError("ndcg_at_k: k must be at least 1");
  for (double rel : relevances) {
    if (rel < 0.0) throw UsageError("ndcg_at_k: negative relevance");
  }
  auto dcg = [&](auto&& rel_at, std::size_t count) {
    double total = 0.0;
    const std::size_t top = std::min<std::size_t>(count,
                                                  static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < top; ++i) {
      total += rel_at(i) / std::log2(static_cast<double>(i) + 2.0);
    }
    return total;
  };
  const double actual = dcg(
      [&](std::size_t i) {
        return relevances[static_cast<std::size_t>(predicted_order[i])];
      },
      predicted_order.size());
  std::vector<double> ideal(relevances.begin(), relevances.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double best = dcg([&](std::size_t i) { return ideal[i]; },
                          ideal.size());
  return best == 0.0 ? 1.0 : actual / best;
}

}  // namespace biset
