#include <cstdio>
#include <fstream>
#include <sstream>

#include "biset/checkpoint.hpp"
#include "biset/rng.hpp"
#include "doctest.h"

using biset::ParamSet;
using biset::Tensor;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParamSet sample_params(biset::Rng& rng) {
  ParamSet params;
  params.add("w_out", Tensor::from_matrix(rng.uniform_matrix(3, 4, -2, 2), true));
  params.add("bias", Tensor::from_vector(rng.uniform_vector(5, -1, 1), true));
  params.add("alpha", Tensor::scalar(rng.uniform(-1, 1), true));
  return params;
}

}  // namespace

TEST_CASE("checkpoint round-trips bit-exactly") {
  biset::Rng rng(41);
  ParamSet params = sample_params(rng);

  const std::string path_a = "tmp_ckpt_a.bin";
  const std::string path_b = "tmp_ckpt_b.bin";
  biset::save_checkpoint(params, path_a);

  // Load into a structurally identical set built in a different insertion
  // order; the file is keyed by name, not position.
  ParamSet fresh;
  fresh.add("alpha", Tensor::scalar(0.0, true));
  fresh.add("bias", Tensor::zeros_vec(5, true));
  fresh.add("w_out", Tensor::zeros(3, 4, true));
  biset::load_checkpoint(fresh, path_a);
  CHECK(fresh.at("w_out").value() == params.at("w_out").value());
  CHECK(fresh.at("bias").value() == params.at("bias").value());
  CHECK(fresh.at("alpha").value() == params.at("alpha").value());

  biset::save_checkpoint(fresh, path_b);
  CHECK(read_file(path_a) == read_file(path_b));

  const std::string bytes = read_file(path_a);
  CHECK(bytes.substr(0, 11) == "BISETCKPT1\n");

  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("checkpoint mismatches are rejected") {
  biset::Rng rng(43);
  ParamSet params = sample_params(rng);
  const std::string path = "tmp_ckpt_c.bin";
  biset::save_checkpoint(params, path);

  ParamSet wrong_shape;
  wrong_shape.add("w_out", Tensor::zeros(3, 5, true));
  wrong_shape.add("bias", Tensor::zeros_vec(5, true));
  wrong_shape.add("alpha", Tensor::scalar(0.0, true));
  CHECK_THROWS_AS(biset::load_checkpoint(wrong_shape, path), biset::DataError);

  ParamSet missing;
  missing.add("bias", Tensor::zeros_vec(5, true));
  CHECK_THROWS_AS(biset::load_checkpoint(missing, path), biset::DataError);

  CHECK_THROWS_AS(biset::load_checkpoint(params, "no_such_file.bin"),
                  biset::ArtifactError);
  std::remove(path.c_str());
}
