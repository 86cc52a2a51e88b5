#include "biset/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>

namespace biset {

namespace {

constexpr char kMagic[] = "BISETCKPT1\n";

void write_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

void write_f64(std::ostream& out, double v) {
  write_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw DataError("checkpoint truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

double read_f64(std::istream& in) {
  return std::bit_cast<double>(read_u64(in));
}

}  // namespace

Tensor ParamSet::add(const std::string& name, Tensor t) {
  if (!index_.emplace(name, tensors_.size()).second) {
    throw UsageError("duplicate parameter name: " + name);
  }
  names_.push_back(name);
  tensors_.push_back(t);
  return t;
}

Tensor& ParamSet::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw UsageError("unknown parameter: " + name);
  return tensors_[it->second];
}

const Tensor& ParamSet::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw UsageError("unknown parameter: " + name);
  return tensors_[it->second];
}

bool ParamSet::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

std::vector<std::pair<std::string, Tensor>> ParamSet::sorted() const {
  std::vector<std::pair<std::string, Tensor>> out;
  out.reserve(tensors_.size());
  for (std::size_t i = 0; i < tensors_.size(); ++i) {
    out.emplace_back(names_[i], tensors_[i]);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void ParamSet::zero_grads() {
  for (Tensor& t : tensors_) t.zero_grad();
}

void save_checkpoint(const ParamSet& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArtifactError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic) - 1);
  for (const auto& [name, tensor] : params.sorted()) {
    write_u64(out, name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    const int rank = tensor.rank();
    write_u64(out, static_cast<std::uint64_t>(rank));
    if (rank >= 1) write_u64(out, static_cast<std::uint64_t>(tensor.rows()));
    if (rank >= 2) write_u64(out, static_cast<std::uint64_t>(tensor.cols()));
    const Mat& v = tensor.value();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) write_f64(out, v(r, c));
    }
  }
  if (!out) throw ArtifactError("failed writing checkpoint: " + path);
}

void load_checkpoint(ParamSet& params, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open checkpoint: " + path);
  char magic[sizeof(kMagic) - 1];
  in.read(magic, sizeof(magic));
  if (!in || std::string_view(magic, sizeof(magic)) != kMagic) {
    throw DataError("bad checkpoint magic: " + path);
  }
  std::size_t seen = 0;
  while (true) {
    int peek = in.peek();
    if (peek == std::char_traits<char>::eof()) break;
    std::uint64_t name_len = read_u64(in);
    std::string name(name_len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(name_len));
    if (!in) throw DataError("checkpoint truncated in name");
    const int rank = static_cast<int>(read_u64(in));
    if (rank < 0 || rank > 2) throw DataError("checkpoint rank out of range");
    std::uint64_t rows = rank >= 1 ? read_u64(in) : 1;
    std::uint64_t cols = rank >= 2 ? read_u64(in) : 1;
    if (!params.contains(name)) {
      throw DataError("checkpoint parameter not in model: " + name);
    }
    Tensor& t = params.at(name);
    if (t.rank() != rank || t.rows() != static_cast<Eigen::Index>(rows) ||
        t.cols() != static_cast<Eigen::Index>(cols)) {
      throw DataError("checkpoint shape mismatch for parameter: " + name);
    }
    Mat& v = t.value();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) v(r, c) = read_f64(in);
    }
    ++seen;
  }
  if (seen != params.size()) {
    throw DataError("checkpoint has " + std::to_string(seen) +
                    " parameters, model expects " +
                    std::to_string(params.size()));
  }
}

}  // namespace biset
