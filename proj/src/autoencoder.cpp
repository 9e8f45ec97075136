#include "hdmf/autoencoder.hpp"

#include <stdexcept>

#include "hdmf/errors.hpp"
#include "hdmf/rng.hpp"

namespace hdmf {

std::size_t Architecture::layer_dim(std::size_t j) const {
  const std::size_t k = depth();
  if (j == 0 || j > 2 * k) throw std::out_of_range("layer index out of range");
  if (j <= k) return encoder_sizes[j - 1];
  if (j == 2 * k) return input_dim;
  return encoder_sizes[2 * k - j - 1];  // mirror: layer K+j has size_{K-j}
}

Architecture Architecture::from_hidden_sizes(std::size_t input_dim,
                                             const std::vector<std::size_t>& hidden) {
  if (hidden.empty() || hidden.size() % 2 == 0)
    throw ConfigError("hidden-size list must have odd length 2K-1");
  const std::size_t k = (hidden.size() + 1) / 2;
  for (std::size_t i = 0; i < hidden.size() / 2; ++i) {
    if (hidden[i] != hidden[hidden.size() - 1 - i])
      throw ConfigError("hidden-size list must be palindromic");
  }
  Architecture arch;
  arch.input_dim = input_dim;
  arch.encoder_sizes.assign(hidden.begin(), hidden.begin() + k);
  arch.validate();
  return arch;
}

void Architecture::validate() const {
  if (input_dim < 1) throw ConfigError("input dimension must be >= 1");
  if (encoder_sizes.empty()) throw ConfigError("encoder needs at least one layer");
  for (std::size_t s : encoder_sizes)
    if (s < 1) throw ConfigError("layer sizes must be >= 1");
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const DenseMatrix& w : weights) n += w.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

bool ModelParams::all_finite() const {
  for (const DenseMatrix& w : weights)
    if (!w.all_finite()) return false;
  for (const auto& b : biases)
    for (double v : b)
      if (!std::isfinite(v)) return false;
  return true;
}

ModelParams init_params(const Architecture& arch, std::uint64_t seed, double stddev) {
  arch.validate();
  if (stddev <= 0.0) throw ConfigError("init stddev must be positive");

  const std::size_t k = arch.depth();
  ModelParams p;
  p.arch = arch;
  p.rng_seed = seed;

  Rng rng(seed);
  std::size_t prev = arch.input_dim;
  for (std::size_t j = 0; j < k; ++j) {
    DenseMatrix w(arch.encoder_sizes[j], prev);
    for (double& v : w.values()) v = rng.normal(0.0, stddev);
    p.weights.push_back(std::move(w));
    prev = arch.encoder_sizes[j];
  }
  for (std::size_t j = 1; j <= 2 * k; ++j)
    p.biases.emplace_back(arch.layer_dim(j), 0.0);
  return p;
}

namespace {

void check_params_shape(const ModelParams& p) {
  const std::size_t k = p.arch.depth();
  if (p.weights.size() != k || p.biases.size() != 2 * k)
    throw std::invalid_argument("parameter lists do not match architecture depth");
}

}  // namespace

DenseMatrix encode(const ModelParams& params, const DenseMatrix& batch, ForwardTrace* trace) {
  check_params_shape(params);
  if (batch.rows() != params.arch.input_dim)
    throw std::invalid_argument("encode: batch rows != input dimension");

  if (trace) {
    trace->activations.clear();
    trace->activations.push_back(batch);
  }
  DenseMatrix h = batch;
  for (std::size_t j = 0; j < params.arch.depth(); ++j) {
    h = tanh_map(add_bias(matmul(params.weights[j], h), params.biases[j]));
    if (trace) trace->activations.push_back(h);
  }
  return h;
}

DenseMatrix decode(const ModelParams& params, const DenseMatrix& codes, ForwardTrace* trace) {
  check_params_shape(params);
  const std::size_t k = params.arch.depth();
  if (codes.rows() != params.arch.code_dim())
    throw std::invalid_argument("decode: code rows != code dimension");

  DenseMatrix h = codes;
  // Hidden decoder layers j = 1..K-1 use W^T_{K-(j-1)}; the output layer
  // uses W^T_1 and bias b_{2K}.
  for (std::size_t j = 1; j <= k; ++j) {
    const DenseMatrix& w = params.weights[k - j];
    h = tanh_map(add_bias(matmul_tn(w, h), params.biases[k + j - 1]));
    if (trace) trace->activations.push_back(h);
  }
  return h;
}

ForwardResult forward_full(const ModelParams& params, const DenseMatrix& batch) {
  ForwardResult result;
  result.codes = encode(params, batch, &result.trace);
  result.reconstruction = decode(params, result.codes, &result.trace);
  return result;
}

}  // namespace hdmf
