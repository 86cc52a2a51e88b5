#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "biset/tensor.hpp"

namespace biset {

/// Named trainable tensors for one model. Iteration order is insertion
/// order (stable, so optimizer slots stay aligned); serialization orders
/// parameters lexicographically by name.
class ParamSet {
 public:
  Tensor add(const std::string& name, Tensor t);
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const;

  std::vector<Tensor>& all() { return tensors_; }
  const std::vector<Tensor>& all() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }

  /// (name, tensor) pairs sorted by name.
  std::vector<std::pair<std::string, Tensor>> sorted() const;

  void zero_grads();

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Checkpoint layout: magic "BISETCKPT1\n", then per parameter in
/// lexicographic name order: u64 LE name length, name bytes, u64 LE rank,
/// u64 LE dims, IEEE-754 LE doubles in row-major order.
void save_checkpoint(const ParamSet& params, const std::string& path);

/// Loads a checkpoint into an already-built parameter set; names and shapes
/// must match exactly.
void load_checkpoint(ParamSet& params, const std::string& path);

}  // namespace biset
