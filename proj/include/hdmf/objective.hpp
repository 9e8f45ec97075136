#ifndef HDMF_OBJECTIVE_HPP
#define HDMF_OBJECTIVE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hdmf/autoencoder.hpp"
#include "hdmf/tensor.hpp"

namespace hdmf {

struct HyperParams {
  double lambda_theta = 0.01;  // parameter-regularization weight
  double lambda_e = 0.2;       // reconstruction weight

  // The factorization-error coefficient 1 - lambda_theta - lambda_e must
  // stay positive.
  void validate() const;
};

// One observed rating, indexing columns of the batch matrices below.
struct RatedPair {
  std::size_t user_col = 0;
  std::size_t item_col = 0;
  double rating = 0.0;
};

// A mini-batch: the union of user profile columns and item profile columns
// touched by its observed pairs. Every pair is observed (I_ij = 1).
struct BatchSpec {
  DenseMatrix user_columns;  // input_dim x n_users
  DenseMatrix item_columns;  // input_dim x n_items
  std::vector<RatedPair> pairs;

  void validate() const;
};

// Gradient of the loss w.r.t. every parameter; shapes mirror ModelParams.
struct GradientSet {
  std::vector<DenseMatrix> weights;
  std::vector<std::vector<double>> biases;

  static GradientSet zeros_like(const ModelParams& params);
  void accumulate(const GradientSet& other);
  void scale(double factor);
  double squared_norm() const;
  bool all_finite() const;
};

// Deep-semantic MF error: (1-lt) * sum of squared rating residuals plus
// lt * (sum ||W_j||^2 + sum_{j<=K} ||b_j||^2). The bias sum stops at K here;
// the hybrid loss below regularizes all 2K biases. Used on its own only in
// pure-DMF training mode.
double dmf_loss(const DenseMatrix& codes_u, const DenseMatrix& codes_v,
                std::span<const RatedPair> pairs, const ModelParams& params,
                const HyperParams& hp);

// Sum over columns of the unsquared L2 norm of (reconstruction - input).
double reconstruction_loss(const DenseMatrix& inputs, const DenseMatrix& reconstructions);

struct HdmfTraces {
  ForwardTrace user;
  ForwardTrace item;
};

// The hybrid learning signal over one batch:
//   (1-lt-le) * sum residual^2 + le * (recon_users + recon_items)
//   + lt * (sum ||W_j||^2 + sum_{j<=2K} ||b_j||^2).
// Both towers run through the same parameters. Traces, when requested,
// retain every activation for hdmf_gradients.
double hdmf_loss(const BatchSpec& batch, const ModelParams& params, const HyperParams& hp,
                 HdmfTraces* traces = nullptr);

// Exact analytic gradient of hdmf_loss. Each W_j accumulates contributions
// from its encoder use and its transposed decoder use, from both towers.
// The unsquared reconstruction norm takes subgradient zero where the
// per-column difference vanishes.
GradientSet hdmf_gradients(const BatchSpec& batch, const ModelParams& params,
                           const HyperParams& hp, const HdmfTraces& traces);

// ---- building blocks, shared with the untied-towers training variant ----

// sum ||W_j||^2 + sum over all 2K biases ||b_j||^2
double param_penalty(const ModelParams& params);

// Gradients of the factorization residual w.r.t. the two code matrices.
// coeff is the residual term's weight (1 - lt - le).
std::pair<DenseMatrix, DenseMatrix> residual_code_gradients(const DenseMatrix& codes_u,
                                                            const DenseMatrix& codes_v,
                                                            std::span<const RatedPair> pairs,
                                                            double coeff);

// Backpropagates one tower: the reconstruction path (weight lambda_e) plus
// an arbitrary gradient on the code layer. Excludes the regularizer.
GradientSet tower_backprop(const ModelParams& params, const ForwardTrace& trace,
                           const DenseMatrix& code_grad, double lambda_e);

void add_regularizer_gradient(GradientSet& grads, const ModelParams& params,
                              double lambda_theta);

// Loss for separate user/item parameter sets (untied mode); the regularizer
// covers both sets.
double hdmf_loss_untied(const BatchSpec& batch, const ModelParams& user_params,
                        const ModelParams& item_params, const HyperParams& hp,
                        HdmfTraces* traces = nullptr);

// ---- finite-difference harness ----

struct CoordinateError {
  std::string parameter;  // "W1", "b3", ...
  std::size_t flat_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradientCheckReport {
  std::size_t coordinates = 0;
  double max_rel_error = 0.0;
  std::vector<CoordinateError> failures;

  bool passed() const { return failures.empty(); }
};

struct GradientCheckSpec {
  std::size_t users = 3;
  std::size_t items = 4;
  std::size_t pairs = 5;
  double epsilon = 1e-4;
  double abs_floor = 1e-8;
  double init_stddev = 1.0;
  HyperParams hp;
};

// Compares every analytic gradient coordinate against central finite
// differences on a random tiny instance. Architectures above 500 total
// parameters are rejected; this is a correctness harness, not a profiler.
GradientCheckReport check_gradients(const Architecture& arch, std::uint64_t seed,
                                    double tolerance,
                                    const GradientCheckSpec& spec = GradientCheckSpec{});

}  // namespace hdmf

#endif
