#ifndef HDMF_AUTOENCODER_HPP
#define HDMF_AUTOENCODER_HPP

#include <cstdint>
#include <vector>

#include "hdmf/tensor.hpp"

namespace hdmf {

// Encoder geometry; the decoder mirrors it. encoder_sizes has K entries,
// the last being the code dimension, so the full network has 2K-1 hidden
// layers plus the input-sized output layer.
struct Architecture {
  std::size_t input_dim = 0;
  std::vector<std::size_t> encoder_sizes;

  std::size_t depth() const { return encoder_sizes.size(); }  // K
  std::size_t code_dim() const { return encoder_sizes.back(); }

  // Output width of hidden layer j in 1..2K-1, plus layer 2K = input_dim.
  std::size_t layer_dim(std::size_t j) const;

  // Builds from a palindromic odd-length hidden-size list (the config
  // surface), e.g. {2000, 300, 128, 300, 2000} -> encoder {2000, 300, 128}.
  static Architecture from_hidden_sizes(std::size_t input_dim,
                                        const std::vector<std::size_t>& hidden);

  void validate() const;
  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// All weights and biases of the tied-weight autoencoder pair. The decoder
// owns no weight matrices; it reads transposes of these. weights[j-1] is
// W_j with shape (size_j, size_{j-1}), size_0 = input_dim. biases holds
// b_1..b_K for the encoder then b_{K+1}..b_{2K} for the decoder.
struct ModelParams {
  Architecture arch;
  std::vector<DenseMatrix> weights;
  std::vector<std::vector<double>> biases;
  std::uint64_t rng_seed = 0;

  std::size_t parameter_count() const;
  bool all_finite() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Weights i.i.d. normal(0, stddev^2) from the seeded generator, biases zero.
ModelParams init_params(const Architecture& arch, std::uint64_t seed, double stddev);

// Per-layer activations for one batch of profile columns: activations[0] is
// the input, activations[K] the codes, activations[2K] the reconstruction.
struct ForwardTrace {
  std::vector<DenseMatrix> activations;
};

// batch holds one normalized profile per column (input_dim rows). Codes are
// the K-th layer activations; the trace, when requested, retains every
// layer for backprop.
DenseMatrix encode(const ModelParams& params, const DenseMatrix& batch,
                   ForwardTrace* trace = nullptr);

// Decoder pass h_{K+j} = tanh(W^T_{K-(j-1)} h_{K+(j-1)} + b_{K+j}); extends
// the trace produced by encode when given.
DenseMatrix decode(const ModelParams& params, const DenseMatrix& codes,
                   ForwardTrace* trace = nullptr);

struct ForwardResult {
  DenseMatrix codes;
  DenseMatrix reconstruction;
  ForwardTrace trace;
};

ForwardResult forward_full(const ModelParams& params, const DenseMatrix& batch);

}  // namespace hdmf

#endif
