#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "biset/tensor.hpp"

namespace biset {

// Differentiable operation library. Every function builds value + pull
// closure; shape violations throw ShapeError before any node is created.

template <typename S>
TensorT<S> add(const TensorT<S>& a, const TensorT<S>& b) {
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(),
                "add: operand shapes differ");
  return TensorT<S>::op(
      a.value() + b.value(), a.rank(), {a, b},
      [a = a.handle(), b = b.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        acc.add(a, adj);
        acc.add(b, adj);
      });
}

template <typename S>
TensorT<S> sub(const TensorT<S>& a, const TensorT<S>& b) {
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(),
                "sub: operand shapes differ");
  return TensorT<S>::op(
      a.value() - b.value(), a.rank(), {a, b},
      [a = a.handle(), b = b.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        acc.add(a, adj);
        acc.add(b, -adj);
      });
}

/// Elementwise (Hadamard) product.
template <typename S>
TensorT<S> mul(const TensorT<S>& a, const TensorT<S>& b) {
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(),
                "mul: operand shapes differ");
  return TensorT<S>::op(
      a.value().cwiseProduct(b.value()), a.rank(), {a, b},
      [a = a.handle(), b = b.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        acc.add(a, adj.cwiseProduct(b->value));
        acc.add(b, adj.cwiseProduct(a->value));
      });
}

template <typename S>
TensorT<S> neg(const TensorT<S>& a) {
  return TensorT<S>::op(
      -a.value(), a.rank(), {a},
      [a = a.handle()](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add(a, -adj);
      });
}

/// Multiplication by a plain (non-differentiated) constant.
template <typename S>
TensorT<S> scale(const TensorT<S>& a, S c) {
  return TensorT<S>::op(
      a.value() * c, a.rank(), {a},
      [a = a.handle(), c](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add(a, adj * c);
      });
}

template <typename S>
TensorT<S> matmul(const TensorT<S>& a, const TensorT<S>& b) {
  require_shape(a.cols() == b.rows(), "matmul: inner dimensions differ");
  int rank = (b.rank() == 1 || a.rank() == 1) && b.cols() == 1 ? 1 : 2;
  return TensorT<S>::op(
      a.value() * b.value(), rank, {a, b},
      [a = a.handle(), b = b.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        acc.add(a, adj * b->value.transpose());
        acc.add(b, a->value.transpose() * adj);
      });
}

template <typename S>
TensorT<S> transpose(const TensorT<S>& a) {
  return TensorT<S>::op(
      a.value().transpose(), a.rank(), {a},
      [a = a.handle()](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add(a, adj.transpose());
      });
}

template <typename S>
TensorT<S> dot(const TensorT<S>& a, const TensorT<S>& b) {
  require_shape(a.cols() == 1 && b.cols() == 1 && a.rows() == b.rows(),
                "dot: expects two vectors of equal length");
  DenseMat<S> out(1, 1);
  out(0, 0) = a.value().col(0).dot(b.value().col(0));
  return TensorT<S>::op(
      std::move(out), 0, {a, b},
      [a = a.handle(), b = b.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        acc.add(a, b->value * adj(0, 0));
        acc.add(b, a->value * adj(0, 0));
      });
}

template <typename S>
TensorT<S> sum(const TensorT<S>& a) {
  DenseMat<S> out(1, 1);
  out(0, 0) = a.value().sum();
  return TensorT<S>::op(
      std::move(out), 0, {a},
      [a = a.handle()](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add(a, DenseMat<S>::Constant(a->value.rows(), a->value.cols(),
                                         adj(0, 0)));
      });
}

template <typename S>
TensorT<S> sigmoid(const TensorT<S>& a) {
  DenseMat<S> y =
      a.value().unaryExpr([](S x) { return S(1) / (S(1) + std::exp(-x)); });
  return TensorT<S>::op(
      y, a.rank(), {a},
      [a = a.handle(), y](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add(a, (adj.array() * y.array() * (S(1) - y.array())).matrix());
      });
}

template <typename S>
TensorT<S> tanh(const TensorT<S>& a) {
  DenseMat<S> y = a.value().array().tanh().matrix();
  return TensorT<S>::op(
      y, a.rank(), {a},
      [a = a.handle(), y](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add(a, (adj.array() * (S(1) - y.array().square())).matrix());
      });
}

template <typename S>
TensorT<S> relu(const TensorT<S>& a) {
  return TensorT<S>::op(
      a.value().cwiseMax(S(0)), a.rank(), {a},
      [a = a.handle()](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add(a, (a->value.array() > S(0))
                       .select(adj, DenseMat<S>::Zero(adj.rows(), adj.cols())));
      });
}

/// Softmax of a column vector.
template <typename S>
TensorT<S> softmax_vec(const TensorT<S>& a) {
  require_shape(a.cols() == 1, "softmax_vec: expects a column vector");
  DenseVec<S> x = a.value().col(0);
  DenseVec<S> y = (x.array() - x.maxCoeff()).exp().matrix();
  y /= y.sum();
  return TensorT<S>::op(
      y, 1, {a},
      [a = a.handle(), y](const DenseMat<S>& adj, Adjoints<S>& acc) {
        S inner = y.col(0).dot(adj.col(0));
        acc.add(a, (y.array() * (adj.array() - inner)).matrix());
      });
}

template <typename S>
TensorT<S> log_softmax_vec(const TensorT<S>& a) {
  require_shape(a.cols() == 1, "log_softmax_vec: expects a column vector");
  DenseVec<S> x = a.value().col(0);
  S m = x.maxCoeff();
  S lse = m + std::log((x.array() - m).exp().sum());
  DenseVec<S> y = (x.array() - lse).matrix();
  return TensorT<S>::op(
      y, 1, {a},
      [a = a.handle(), y](const DenseMat<S>& adj, Adjoints<S>& acc) {
        S total = adj.sum();
        acc.add(a, (adj.array() - y.array().exp() * total).matrix());
      });
}

/// Independent softmax over every row of a matrix.
template <typename S>
TensorT<S> softmax_rows(const TensorT<S>& a) {
  DenseMat<S> y = a.value();
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    S m = y.row(r).maxCoeff();
    y.row(r) = (y.row(r).array() - m).exp().matrix();
    y.row(r) /= y.row(r).sum();
  }
  return TensorT<S>::op(
      y, 2, {a},
      [a = a.handle(), y](const DenseMat<S>& adj, Adjoints<S>& acc) {
        DenseVec<S> inner = y.cwiseProduct(adj).rowwise().sum();
        acc.add(a,
                (y.array() * (adj.array().colwise() - inner.array())).matrix());
      });
}

/// Adds a length-n vector to every row of an [m x n] matrix.
template <typename S>
TensorT<S> add_row_vec(const TensorT<S>& x, const TensorT<S>& v) {
  require_shape(v.cols() == 1 && v.rows() == x.cols(),
                "add_row_vec: vector length must equal matrix width");
  DenseMat<S> y = x.value().rowwise() + v.value().col(0).transpose();
  return TensorT<S>::op(
      std::move(y), 2, {x, v},
      [x = x.handle(), v = v.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        acc.add(x, adj);
        acc.add(v, adj.colwise().sum().transpose());
      });
}

/// Adds a length-m vector to every column of an [m x n] matrix.
template <typename S>
TensorT<S> add_col_vec(const TensorT<S>& x, const TensorT<S>& v) {
  require_shape(v.cols() == 1 && v.rows() == x.rows(),
                "add_col_vec: vector length must equal matrix height");
  DenseMat<S> y = x.value().colwise() + v.value().col(0);
  return TensorT<S>::op(
      std::move(y), 2, {x, v},
      [x = x.handle(), v = v.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        acc.add(x, adj);
        acc.add(v, adj.rowwise().sum());
      });
}

/// Scales column j of the matrix by v[j].
template <typename S>
TensorT<S> mul_row_vec(const TensorT<S>& x, const TensorT<S>& v) {
  require_shape(v.cols() == 1 && v.rows() == x.cols(),
                "mul_row_vec: vector length must equal matrix width");
  DenseMat<S> y = (x.value().array().rowwise() *
                   v.value().col(0).transpose().array())
                      .matrix();
  return TensorT<S>::op(
      std::move(y), 2, {x, v},
      [x = x.handle(), v = v.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        acc.add(x, (adj.array().rowwise() *
                    v->value.col(0).transpose().array())
                       .matrix());
        acc.add(v, adj.cwiseProduct(x->value).colwise().sum().transpose());
      });
}

/// Product of a scalar tensor with a matrix tensor (both differentiated).
template <typename S>
TensorT<S> scale_by(const TensorT<S>& s, const TensorT<S>& x) {
  require_shape(s.size() == 1, "scale_by: first operand must be a scalar");
  return TensorT<S>::op(
      x.value() * s.value()(0, 0), x.rank(), {s, x},
      [s = s.handle(), x = x.handle()](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        DenseMat<S> ds(1, 1);
        ds(0, 0) = adj.cwiseProduct(x->value).sum();
        acc.add(s, ds);
        acc.add(x, adj * s->value(0, 0));
      });
}

/// Stacks tensors vertically (equal widths required).
template <typename S>
TensorT<S> vstack(const std::vector<TensorT<S>>& parts) {
  require_shape(!parts.empty(), "vstack: no inputs");
  Eigen::Index cols = parts.front().cols(), rows = 0;
  for (const auto& p : parts) {
    require_shape(p.cols() == cols, "vstack: widths differ");
    rows += p.rows();
  }
  DenseMat<S> y(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    y.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  int rank = cols == 1 ? 1 : 2;
  return TensorT<S>::op(
      std::move(y), rank, parts,
      [parts](const DenseMat<S>& adj, Adjoints<S>& acc) {
        Eigen::Index at = 0;
        for (const auto& p : parts) {
          acc.add(p.handle(), adj.middleRows(at, p.rows()));
          at += p.rows();
        }
      });
}

template <typename S, typename... Rest>
TensorT<S> vstack(const TensorT<S>& first, const Rest&... rest) {
  return vstack(std::vector<TensorT<S>>{first, rest...});
}

/// Stacks tensors horizontally (equal heights required).
template <typename S>
TensorT<S> hstack(const std::vector<TensorT<S>>& parts) {
  require_shape(!parts.empty(), "hstack: no inputs");
  Eigen::Index rows = parts.front().rows(), cols = 0;
  for (const auto& p : parts) {
    require_shape(p.rows() == rows, "hstack: heights differ");
    cols += p.cols();
  }
  DenseMat<S> y(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    y.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  return TensorT<S>::op(
      std::move(y), 2, parts,
      [parts](const DenseMat<S>& adj, Adjoints<S>& acc) {
        Eigen::Index at = 0;
        for (const auto& p : parts) {
          acc.add(p.handle(), adj.middleCols(at, p.cols()));
          at += p.cols();
        }
      });
}

template <typename S, typename... Rest>
TensorT<S> hstack(const TensorT<S>& first, const Rest&... rest) {
  return hstack(std::vector<TensorT<S>>{first, rest...});
}

template <typename S>
TensorT<S> slice_rows(const TensorT<S>& x, Eigen::Index first,
                      Eigen::Index count) {
  require_shape(first >= 0 && count >= 1 && first + count <= x.rows(),
                "slice_rows: range out of bounds");
  return TensorT<S>::op(
      x.value().middleRows(first, count), x.rank(), {x},
      [x = x.handle(), first, count](const DenseMat<S>& adj,
                                     Adjoints<S>& acc) {
        acc.add_block(x, first, 0, count, x->value.cols(), adj);
      });
}

template <typename S>
TensorT<S> slice_cols(const TensorT<S>& x, Eigen::Index first,
                      Eigen::Index count) {
  require_shape(first >= 0 && count >= 1 && first + count <= x.cols(),
                "slice_cols: range out of bounds");
  return TensorT<S>::op(
      x.value().middleCols(first, count), x.rank(), {x},
      [x = x.handle(), first, count](const DenseMat<S>& adj,
                                     Adjoints<S>& acc) {
        acc.add_block(x, 0, first, x->value.rows(), count, adj);
      });
}

/// Row `id` of an embedding table, returned as a column vector.
template <typename S>
TensorT<S> lookup(const TensorT<S>& table, Eigen::Index id) {
  require_shape(id >= 0 && id < table.rows(), "lookup: row out of bounds");
  return TensorT<S>::op(
      table.value().row(id).transpose(), 1, {table},
      [table = table.handle(), id](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add_block(table, id, 0, 1, table->value.cols(), adj.transpose());
      });
}

/// Gathers table rows for a token id sequence into an [L x d] matrix.
template <typename S>
TensorT<S> lookup_rows(const TensorT<S>& table,
                       const std::vector<int>& ids) {
  require_shape(!ids.empty(), "lookup_rows: empty id sequence");
  DenseMat<S> y(static_cast<Eigen::Index>(ids.size()), table.cols());
  for (std::size_t t = 0; t < ids.size(); ++t) {
    require_shape(ids[t] >= 0 && ids[t] < table.rows(),
                  "lookup_rows: row out of bounds");
    y.row(static_cast<Eigen::Index>(t)) = table.value().row(ids[t]);
  }
  return TensorT<S>::op(
      std::move(y), 2, {table},
      [table = table.handle(), ids](const DenseMat<S>& adj,
                                    Adjoints<S>& acc) {
        const Eigen::Index d = table->value.cols();
        for (std::size_t t = 0; t < ids.size(); ++t) {
          acc.add_block(table, ids[t], 0, 1, d,
                        adj.row(static_cast<Eigen::Index>(t)));
        }
      });
}

/// Element i of a column vector, as a scalar tensor.
template <typename S>
TensorT<S> pick(const TensorT<S>& v, Eigen::Index i) {
  require_shape(v.cols() == 1 && i >= 0 && i < v.rows(),
                "pick: index out of bounds");
  DenseMat<S> out(1, 1);
  out(0, 0) = v.value()(i, 0);
  return TensorT<S>::op(
      std::move(out), 0, {v},
      [v = v.handle(), i](const DenseMat<S>& adj, Adjoints<S>& acc) {
        acc.add_block(v, i, 0, 1, 1, adj);
      });
}

/// Column-wise maximum: q[j] = max_i X[i][j]. Ties resolve to the smallest
/// row index, which keeps the backward pass deterministic.
template <typename S>
TensorT<S> colwise_max(const TensorT<S>& x) {
  require_shape(x.rows() >= 1 && x.cols() >= 1, "colwise_max: empty matrix");
  DenseVec<S> q(x.cols());
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < x.rows(); ++i) {
      if (x.value()(i, j) > x.value()(best, j)) best = i;
    }
    arg[static_cast<std::size_t>(j)] = best;
    q(j) = x.value()(best, j);
  }
  return TensorT<S>::op(
      q, 1, {x},
      [x = x.handle(), arg](const DenseMat<S>& adj, Adjoints<S>& acc) {
        for (Eigen::Index j = 0; j < x->value.cols(); ++j) {
          acc.add_block(x, arg[static_cast<std::size_t>(j)], j, 1, 1,
                        adj.block(j, 0, 1, 1));
        }
      });
}

/// k-max pooling: the k largest entries of a vector in their original order.
/// Vectors shorter than k are zero-padded at the tail first. Ties keep the
/// earliest position.
template <typename S>
TensorT<S> kmax(const TensorT<S>& v, Eigen::Index k) {
  require_shape(v.cols() == 1, "kmax: expects a column vector");
  require_shape(k >= 1, "kmax: k must be positive");
  const Eigen::Index n = v.rows();
  const Eigen::Index padded = std::max(n, k);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(padded));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  auto value_at = [&](Eigen::Index i) {
    return i < n ? v.value()(i, 0) : S(0);
  };
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a,
                                               Eigen::Index b) {
    return value_at(a) > value_at(b);
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  DenseVec<S> p(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    p(i) = value_at(idx[static_cast<std::size_t>(i)]);
  }
  return TensorT<S>::op(
      p, 1, {v},
      [v = v.handle(), idx, n](const DenseMat<S>& adj, Adjoints<S>& acc) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
          if (idx[i] < n) {
            acc.add_block(v, idx[i], 0, 1, 1,
                          adj.block(static_cast<Eigen::Index>(i), 0, 1, 1));
          }
        }
      });
}

/// Pairwise similarity s_ij = exp(-||S_i - T_j||^2) between the rows of two
/// feature matrices with a common width.
template <typename S>
TensorT<S> gaussian_similarity(const TensorT<S>& s, const TensorT<S>& t) {
  require_shape(s.cols() == t.cols(),
                "gaussian_similarity: feature widths differ");
  DenseVec<S> s2 = s.value().rowwise().squaredNorm();
  DenseVec<S> t2 = t.value().rowwise().squaredNorm();
  DenseMat<S> y = S(2) * (s.value() * t.value().transpose());
  y.colwise() -= s2;
  y.rowwise() -= t2.transpose();
  y = y.array().exp().matrix();  // exp(-(s2_i + t2_j - 2 S_i.T_j))
  return TensorT<S>::op(
      y, 2, {s, t},
      [s = s.handle(), t = t.handle(), y](const DenseMat<S>& adj,
                                          Adjoints<S>& acc) {
        DenseMat<S> c = adj.cwiseProduct(y);
        DenseVec<S> crow = c.rowwise().sum();
        DenseVec<S> ccol = c.colwise().sum().transpose();
        acc.add(s, S(2) * (c * t->value -
                           (s->value.array().colwise() * crow.array())
                               .matrix()));
        acc.add(t, S(2) * (c.transpose() * s->value -
                           (t->value.array().colwise() * ccol.array())
                               .matrix()));
      });
}

/// Concatenates the centered window of w rows around each position, with
/// zero rows past either end: row i = [X_{i-h}; ...; X_{i+h}], h = (w-1)/2.
template <typename S>
TensorT<S> window_concat(const TensorT<S>& x, Eigen::Index w) {
  require_shape(w >= 1 && w % 2 == 1, "window_concat: width must be odd");
  const Eigen::Index rows = x.rows(), d = x.cols(), h = (w - 1) / 2;
  DenseMat<S> y = DenseMat<S>::Zero(rows, w * d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index o = 0; o < w; ++o) {
      Eigen::Index src = i - h + o;
      if (src >= 0 && src < rows) y.block(i, o * d, 1, d) = x.value().row(src);
    }
  }
  return TensorT<S>::op(
      std::move(y), 2, {x},
      [x = x.handle(), w, h, d](const DenseMat<S>& adj, Adjoints<S>& acc) {
        const Eigen::Index rows = x->value.rows();
        for (Eigen::Index i = 0; i < rows; ++i) {
          for (Eigen::Index o = 0; o < w; ++o) {
            Eigen::Index src = i - h + o;
            if (src >= 0 && src < rows) {
              acc.add_block(x, src, 0, 1, d, adj.block(i, o * d, 1, d));
            }
          }
        }
      });
}

/// Numerically stable binary cross-entropy against a fixed target, taking
/// the score as a logit: loss = -[t log sigma(x) + (1-t) log(1-sigma(x))].
template <typename S>
TensorT<S> bce_with_logits(const TensorT<S>& logit, S target) {
  require_shape(logit.size() == 1, "bce_with_logits: logit must be scalar");
  if (target < S(0) || target > S(1)) {
    throw DataError("bce_with_logits: target outside [0,1]");
  }
  S x = logit.value()(0, 0);
  DenseMat<S> out(1, 1);
  out(0, 0) = std::max(x, S(0)) - x * target + std::log1p(std::exp(-std::abs(x)));
  return TensorT<S>::op(
      std::move(out), 0, {logit},
      [logit = logit.handle(), target](const DenseMat<S>& adj,
                                       Adjoints<S>& acc) {
        S x = logit->value(0, 0);
        S sig = S(1) / (S(1) + std::exp(-x));
        DenseMat<S> g(1, 1);
        g(0, 0) = adj(0, 0) * (sig - target);
        acc.add(logit, g);
      });
}

/// Gated linear unit: splits the feature axis in half and gates the first
/// half with the sigmoid of the second. Vectors split along rows, matrices
/// along columns (per-position features in rows).
template <typename S>
TensorT<S> glu(const TensorT<S>& h) {
  if (h.rank() <= 1 || h.cols() == 1) {
    require_shape(h.rows() % 2 == 0, "glu: input length must be even");
    Eigen::Index d = h.rows() / 2;
    return mul(slice_rows(h, 0, d), sigmoid(slice_rows(h, d, d)));
  }
  require_shape(h.cols() % 2 == 0, "glu: input width must be even");
  Eigen::Index d = h.cols() / 2;
  return mul(slice_cols(h, 0, d), sigmoid(slice_cols(h, d, d)));
}

/// 1-D convolution over a token-embedding sequence with zero padding on both
/// sides; row i of the result is kernel * [e_{i-h}; ...; e_{i+h}] + bias.
template <typename S>
TensorT<S> conv1d_ngram(const TensorT<S>& embeds, const TensorT<S>& kernel,
                        const TensorT<S>& bias, Eigen::Index width) {
  require_shape(width >= 1 && width % 2 == 1,
                "conv1d_ngram: kernel width must be odd");
  require_shape(kernel.cols() == width * embeds.cols(),
                "conv1d_ngram: kernel columns must equal width * embed dim");
  require_shape(bias.cols() == 1 && bias.rows() == kernel.rows(),
                "conv1d_ngram: bias length must equal kernel rows");
  return add_row_vec(matmul(window_concat(embeds, width), transpose(kernel)),
                     bias);
}

/// Inverted dropout: keeps entries with probability 1-rate and rescales by
/// 1/(1-rate) so expectations match at inference, where this is the identity.
template <typename S, typename Urbg>
TensorT<S> dropout(const TensorT<S>& x, double rate, Urbg& gen,
                   bool training) {
  if (!training || rate <= 0.0) return x;
  if (rate >= 1.0) throw ConfigError("dropout: rate must be below 1");
  std::bernoulli_distribution keep(1.0 - rate);
  DenseMat<S> mask(x.rows(), x.cols());
  const S inv = S(1) / S(1.0 - rate);
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      mask(r, c) = keep(gen) ? inv : S(0);
    }
  }
  return mul(x, TensorT<S>::op(std::move(mask), x.rank(), {},
                               [](const DenseMat<S>&, Adjoints<S>&) {}));
}

template <typename S>
TensorT<S> operator+(const TensorT<S>& a, const TensorT<S>& b) {
  return add(a, b);
}
template <typename S>
TensorT<S> operator-(const TensorT<S>& a, const TensorT<S>& b) {
  return sub(a, b);
}
template <typename S>
TensorT<S> operator-(const TensorT<S>& a) {
  return neg(a);
}
template <typename S>
TensorT<S> operator*(S c, const TensorT<S>& a) {
  return scale(a, c);
}

}  // namespace biset
