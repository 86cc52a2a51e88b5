#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "biset/errors.hpp"

namespace biset {

template <typename Scalar>
using DenseMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
class TensorT;
template <typename Scalar>
class Adjoints;
template <typename Scalar>
class ComputationRecordT;

namespace detail {

/// One value in the computation graph. Values are immutable once produced by
/// an operation; `grad` is the accumulated-gradient slot and is the only
/// field backward() mutates. `pull` distributes an adjoint to the parents.
template <typename Scalar>
struct TensorNode {
  DenseMat<Scalar> value;
  DenseMat<Scalar> grad;  // same storage shape as value, zero-initialized
  int rank = 2;           // logical rank: 0 scalar, 1 vector, 2 matrix
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(const DenseMat<Scalar>&, Adjoints<Scalar>&)> pull;
};

}  // namespace detail

/// Shared handle to a graph node. Copying a tensor aliases the same value and
/// gradient storage; all math on tensors goes through the free functions in
/// ops.hpp, which record the operations they execute for reverse replay.
template <typename Scalar>
class TensorT {
 public:
  using Mat = DenseMat<Scalar>;
  using Vec = DenseVec<Scalar>;
  using Node = detail::TensorNode<Scalar>;

  TensorT() = default;

  static TensorT scalar(Scalar v, bool requires_grad = false) {
    Mat m(1, 1);
    m(0, 0) = v;
    return make(std::move(m), 0, requires_grad);
  }

  static TensorT from_vector(const Vec& v, bool requires_grad = false) {
    return make(v, 1, requires_grad);
  }

  static TensorT from_matrix(Mat m, bool requires_grad = false) {
    return make(std::move(m), 2, requires_grad);
  }

  static TensorT zeros(Eigen::Index rows, Eigen::Index cols,
                       bool requires_grad = false) {
    return make(Mat::Zero(rows, cols), cols == 1 && rows == 1 ? 0 : 2,
                requires_grad);
  }

  static TensorT zeros_vec(Eigen::Index n, bool requires_grad = false) {
    return make(Mat::Zero(n, 1), 1, requires_grad);
  }

  /// Graph-building factory used by the operation library.
  template <typename Pull>
  static TensorT op(Mat value, int rank, std::vector<TensorT> parents,
                    Pull&& pull) {
    TensorT t = make(std::move(value), rank, false);
    t.n_->parents.reserve(parents.size());
    for (const TensorT& p : parents) {
      t.n_->requires_grad = t.n_->requires_grad || p.requires_grad();
      t.n_->parents.push_back(p.n_);
    }
    if (t.n_->requires_grad) t.n_->pull = std::forward<Pull>(pull);
    return t;
  }

  bool valid() const { return n_ != nullptr; }
  int rank() const { return n_->rank; }
  Eigen::Index rows() const { return n_->value.rows(); }
  Eigen::Index cols() const { return n_->value.cols(); }
  Eigen::Index size() const { return n_->value.size(); }
  bool requires_grad() const { return n_->requires_grad; }

  const Mat& value() const { return n_->value; }
  Mat& value() { return n_->value; }
  const Mat& grad() const { return n_->grad; }
  Mat& grad() { return n_->grad; }

  Scalar item() const {
    require_shape(n_->value.size() == 1, "item(): tensor is not a scalar");
    return n_->value(0, 0);
  }

  void zero_grad() { n_->grad.setZero(); }

  Node* node() const { return n_.get(); }
  const std::shared_ptr<Node>& handle() const { return n_; }

  friend bool operator==(const TensorT& a, const TensorT& b) {
    return a.n_ == b.n_;
  }

 private:
  static TensorT make(Mat value, int rank, bool requires_grad) {
    TensorT t;
    t.n_ = std::make_shared<Node>();
    t.n_->grad = Mat::Zero(value.rows(), value.cols());
    t.n_->value = std::move(value);
    t.n_->rank = rank;
    t.n_->requires_grad = requires_grad;
    return t;
  }

  std::shared_ptr<Node> n_;
};

/// Scratch adjoint buffers for one backward sweep. Contributions to tensors
/// that do not require gradients are dropped.
template <typename Scalar>
class Adjoints {
 public:
  using Node = detail::TensorNode<Scalar>;
  using Mat = DenseMat<Scalar>;

  template <typename Expr>
  void add(const std::shared_ptr<Node>& node, const Expr& contribution) {
    if (!node->requires_grad) return;
    buffer(node) += contribution;
  }

  /// Accumulates into a sub-block only; avoids materializing full-size
  /// scatter matrices for gather-style ops (embedding lookups, slices).
  template <typename Expr>
  void add_block(const std::shared_ptr<Node>& node, Eigen::Index row,
                 Eigen::Index col, Eigen::Index rows, Eigen::Index cols,
                 const Expr& contribution) {
    if (!node->requires_grad) return;
    buffer(node).block(row, col, rows, cols) += contribution;
  }

  const Mat* find(const Node* node) const {
    auto it = buffers_.find(node);
    return it == buffers_.end() ? nullptr : &it->second;
  }

  Mat& seed(const Node* node, Eigen::Index rows, Eigen::Index cols) {
    auto& buf = buffers_[node];
    buf = Mat::Zero(rows, cols);
    return buf;
  }

 private:
  Mat& buffer(const std::shared_ptr<Node>& node) {
    auto [it, inserted] = buffers_.try_emplace(node.get());
    if (inserted) {
      it->second = Mat::Zero(node->value.rows(), node->value.cols());
    }
    return it->second;
  }

  std::unordered_map<const Node*, Mat> buffers_;
};

/// The ordered list of executed operations that produced one output, in
/// topological order (inputs precede consumers). Replaying the record in
/// reverse accumulates d(output)/d(tensor) into every tensor that requires a
/// gradient. Replays are additive: running backward() twice doubles grads.
template <typename Scalar>
class ComputationRecordT {
 public:
  using Tensor = TensorT<Scalar>;
  using Node = detail::TensorNode<Scalar>;

  static ComputationRecordT trace(const Tensor& output) {
    require_shape(output.valid() && output.size() == 1,
                  "backward: loss must be a scalar tensor");
    ComputationRecordT rec;
    rec.output_ = output;

    // Iterative post-order walk; recursion would overflow on long op chains.
    std::unordered_set<const Node*> visited;
    std::vector<std::pair<std::shared_ptr<Node>, std::size_t>> stack;
    stack.emplace_back(output.handle(), 0);
    visited.insert(output.node());
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < node->parents.size()) {
        auto parent = node->parents[next++];
        if (visited.insert(parent.get()).second) {
          stack.emplace_back(std::move(parent), 0);
        }
      } else {
        rec.order_.push_back(std::move(node));
        stack.pop_back();
      }
    }
    return rec;
  }

  void backward() {
    Adjoints<Scalar> adjoints;
    adjoints.seed(output_.node(), 1, 1)(0, 0) = Scalar(1);
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      Node* node = it->get();
      const auto* adj = adjoints.find(node);
      if (adj == nullptr) continue;
      node->grad += *adj;
      if (node->requires_grad && node->pull) node->pull(*adj, adjoints);
    }
  }

  std::size_t size() const { return order_.size(); }

  /// Breaks parent links and drops pull closures so that releasing the last
  /// external handle frees the graph without deep destructor chains.
  void release_graph() {
    for (auto& node : order_) {
      node->parents.clear();
      node->pull = nullptr;
    }
  }

 private:
  Tensor output_;
  std::vector<std::shared_ptr<Node>> order_;
};

/// Accumulates d(loss)/d(t) into t.grad for every tensor reachable from
/// `loss` that requires a gradient. The graph stays intact afterwards.
template <typename Scalar>
void backward(const TensorT<Scalar>& loss) {
  ComputationRecordT<Scalar>::trace(loss).backward();
}

/// backward() followed by graph teardown; use at the end of a training step.
template <typename Scalar>
void backward_release(const TensorT<Scalar>& loss) {
  auto rec = ComputationRecordT<Scalar>::trace(loss);
  rec.backward();
  rec.release_graph();
}

using Tensor = TensorT<double>;
using ComputationRecord = ComputationRecordT<double>;
using Mat = DenseMat<double>;
using Vec = DenseVec<double>;

}  // namespace biset
