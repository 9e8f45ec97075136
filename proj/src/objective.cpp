#include "hdmf/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "hdmf/errors.hpp"
#include "hdmf/rng.hpp"

namespace hdmf {

void HyperParams::validate() const {
  if (lambda_theta < 0.0 || lambda_theta >= 1.0)
    throw ConfigError("lambda_theta must lie in [0, 1)");
  if (lambda_e < 0.0 || lambda_e >= 1.0) throw ConfigError("lambda_e must lie in [0, 1)");
  if (lambda_theta + lambda_e >= 1.0)
    throw ConfigError("lambda_theta + lambda_e must stay below 1");
}

void BatchSpec::validate() const {
  if (user_columns.rows() != item_columns.rows())
    throw std::invalid_argument("user and item columns disagree on input dimension");
  for (const RatedPair& p : pairs) {
    if (p.user_col >= user_columns.cols() || p.item_col >= item_columns.cols())
      throw std::out_of_range("rated pair indexes a missing batch column");
  }
}

GradientSet GradientSet::zeros_like(const ModelParams& params) {
  GradientSet g;
  for (const DenseMatrix& w : params.weights) g.weights.emplace_back(w.rows(), w.cols());
  for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);
  return g;
}

void GradientSet::accumulate(const GradientSet& other) {
  for (std::size_t i = 0; i < weights.size(); ++i) add_in_place(weights[i], other.weights[i]);
  for (std::size_t i = 0; i < biases.size(); ++i)
    for (std::size_t j = 0; j < biases[i].size(); ++j) biases[i][j] += other.biases[i][j];
}

void GradientSet::scale(double factor) {
  for (DenseMatrix& w : weights)
    for (double& v : w.values()) v *= factor;
  for (auto& b : biases)
    for (double& v : b) v *= factor;
}

double GradientSet::squared_norm() const {
  double sum = 0.0;
  for (const DenseMatrix& w : weights) sum += frobenius_sq(w);
  for (const auto& b : biases)
    for (double v : b) sum += v * v;
  return sum;
}

bool GradientSet::all_finite() const {
  for (const DenseMatrix& w : weights)
    if (!w.all_finite()) return false;
  for (const auto& b : biases)
    for (double v : b)
      if (!std::isfinite(v)) return false;
  return true;
}

namespace {

double column_dot(const DenseMatrix& a, std::size_t ca, const DenseMatrix& b, std::size_t cb) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) sum += a(r, ca) * b(r, cb);
  return sum;
}

double residual_sq_sum(const DenseMatrix& codes_u, const DenseMatrix& codes_v,
                       std::span<const RatedPair> pairs) {
  double sum = 0.0;
  for (const RatedPair& p : pairs) {
    const double e = p.rating - column_dot(codes_u, p.user_col, codes_v, p.item_col);
    sum += e * e;
  }
  return sum;
}

}  // namespace

double param_penalty(const ModelParams& params) {
  double sum = 0.0;
  for (const DenseMatrix& w : params.weights) sum += frobenius_sq(w);
  for (const auto& b : params.biases)
    for (double v : b) sum += v * v;
  return sum;
}

double dmf_loss(const DenseMatrix& codes_u, const DenseMatrix& codes_v,
                std::span<const RatedPair> pairs, const ModelParams& params,
                const HyperParams& hp) {
  for (const RatedPair& p : pairs) {
    if (p.user_col >= codes_u.cols() || p.item_col >= codes_v.cols())
      throw std::out_of_range("rated pair indexes a missing code column");
  }
  double reg = 0.0;
  for (const DenseMatrix& w : params.weights) reg += frobenius_sq(w);
  const std::size_t k = params.arch.depth();
  for (std::size_t j = 0; j < k; ++j)  // encoder biases only, b_1..b_K
    for (double v : params.biases[j]) reg += v * v;
  return (1.0 - hp.lambda_theta) * residual_sq_sum(codes_u, codes_v, pairs) +
         hp.lambda_theta * reg;
}

double reconstruction_loss(const DenseMatrix& inputs, const DenseMatrix& reconstructions) {
  if (!inputs.same_shape(reconstructions))
    throw std::invalid_argument("reconstruction_loss: shape mismatch");
  double total = 0.0;
  for (std::size_t c = 0; c < inputs.cols(); ++c) {
    double sq = 0.0;
    for (std::size_t r = 0; r < inputs.rows(); ++r) {
      const double d = reconstructions(r, c) - inputs(r, c);
      sq += d * d;
    }
    total += std::sqrt(sq);
  }
  return total;
}

namespace {

struct TowerPieces {
  double residual_sq = 0.0;
  double recon_user = 0.0;
  double recon_item = 0.0;
};

TowerPieces forward_pieces(const BatchSpec& batch, const ModelParams& user_params,
                           const ModelParams& item_params, HdmfTraces* traces) {
  ForwardResult fu = forward_full(user_params, batch.user_columns);
  ForwardResult fv = forward_full(item_params, batch.item_columns);

  TowerPieces pieces;
  pieces.residual_sq = residual_sq_sum(fu.codes, fv.codes, batch.pairs);
  pieces.recon_user = reconstruction_loss(batch.user_columns, fu.reconstruction);
  pieces.recon_item = reconstruction_loss(batch.item_columns, fv.reconstruction);
  if (traces) {
    traces->user = std::move(fu.trace);
    traces->item = std::move(fv.trace);
  }
  return pieces;
}

}  // namespace

double hdmf_loss(const BatchSpec& batch, const ModelParams& params, const HyperParams& hp,
                 HdmfTraces* traces) {
  hp.validate();
  batch.validate();
  const TowerPieces pieces = forward_pieces(batch, params, params, traces);
  return (1.0 - hp.lambda_theta - hp.lambda_e) * pieces.residual_sq +
         hp.lambda_e * (pieces.recon_user + pieces.recon_item) +
         hp.lambda_theta * param_penalty(params);
}

double hdmf_loss_untied(const BatchSpec& batch, const ModelParams& user_params,
                        const ModelParams& item_params, const HyperParams& hp,
                        HdmfTraces* traces) {
  hp.validate();
  batch.validate();
  const TowerPieces pieces = forward_pieces(batch, user_params, item_params, traces);
  return (1.0 - hp.lambda_theta - hp.lambda_e) * pieces.residual_sq +
         hp.lambda_e * (pieces.recon_user + pieces.recon_item) +
         hp.lambda_theta * (param_penalty(user_params) + param_penalty(item_params));
}

std::pair<DenseMatrix, DenseMatrix> residual_code_gradients(const DenseMatrix& codes_u,
                                                            const DenseMatrix& codes_v,
                                                            std::span<const RatedPair> pairs,
                                                            double coeff) {
  DenseMatrix grad_u(codes_u.rows(), codes_u.cols());
  DenseMatrix grad_v(codes_v.rows(), codes_v.cols());
  for (const RatedPair& p : pairs) {
    const double e = p.rating - column_dot(codes_u, p.user_col, codes_v, p.item_col);
    const double c = -2.0 * coeff * e;
    for (std::size_t r = 0; r < codes_u.rows(); ++r) {
      grad_u(r, p.user_col) += c * codes_v(r, p.item_col);
      grad_v(r, p.item_col) += c * codes_u(r, p.user_col);
    }
  }
  return {std::move(grad_u), std::move(grad_v)};
}

namespace {

// d tanh recovered from the stored activation: tanh' = 1 - tanh^2.
DenseMatrix tanh_backprop(const DenseMatrix& upstream, const DenseMatrix& activation) {
  DenseMatrix delta = upstream;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double a = activation.values()[i];
    delta.values()[i] *= 1.0 - a * a;
  }
  return delta;
}

void add_to_bias(std::vector<double>& bias, const DenseMatrix& delta) {
  const std::vector<double> sums = row_sums(delta);
  for (std::size_t i = 0; i < bias.size(); ++i) bias[i] += sums[i];
}

}  // namespace

GradientSet tower_backprop(const ModelParams& params, const ForwardTrace& trace,
                           const DenseMatrix& code_grad, double lambda_e) {
  const std::size_t k = params.arch.depth();
  if (trace.activations.size() != 2 * k + 1)
    throw std::invalid_argument("trace does not cover the full forward pass");
  if (!code_grad.same_shape(trace.activations[k]))
    throw std::invalid_argument("code gradient shape mismatch");

  GradientSet grads = GradientSet::zeros_like(params);
  const DenseMatrix& input = trace.activations[0];
  const DenseMatrix& output = trace.activations[2 * k];

  // Reconstruction-path gradient on the output layer. The per-column norm
  // is unsquared, so each column contributes its unit difference vector;
  // zero difference takes subgradient zero.
  DenseMatrix upstream(output.rows(), output.cols());
  if (lambda_e != 0.0) {
    for (std::size_t c = 0; c < output.cols(); ++c) {
      double sq = 0.0;
      for (std::size_t r = 0; r < output.rows(); ++r) {
        const double d = output(r, c) - input(r, c);
        sq += d * d;
      }
      const double norm = std::sqrt(sq);
      if (norm > 0.0) {
        for (std::size_t r = 0; r < output.rows(); ++r)
          upstream(r, c) = lambda_e * (output(r, c) - input(r, c)) / norm;
      }
    }
  }

  // Decoder walk, layers 2K down to K+1. Decoder layer K+m applies
  // W^T_{K-m+1}, so its weight gradient is a_{K+m-1} delta^T and the
  // upstream gradient is W_{K-m+1} delta.
  for (std::size_t m = k; m >= 1; --m) {
    const std::size_t layer = k + m;
    const DenseMatrix delta = tanh_backprop(upstream, trace.activations[layer]);
    const std::size_t w_idx = k - m;
    add_in_place(grads.weights[w_idx], matmul_nt(trace.activations[layer - 1], delta));
    add_to_bias(grads.biases[layer - 1], delta);
    upstream = matmul(params.weights[w_idx], delta);
  }

  // Code layer joins the factorization-residual path.
  add_in_place(upstream, code_grad);

  // Encoder walk, layers K down to 1.
  for (std::size_t j = k; j >= 1; --j) {
    const DenseMatrix delta = tanh_backprop(upstream, trace.activations[j]);
    add_in_place(grads.weights[j - 1], matmul_nt(delta, trace.activations[j - 1]));
    add_to_bias(grads.biases[j - 1], delta);
    if (j > 1) upstream = matmul_tn(params.weights[j - 1], delta);
  }
  return grads;
}

void add_regularizer_gradient(GradientSet& grads, const ModelParams& params,
                              double lambda_theta) {
  for (std::size_t i = 0; i < grads.weights.size(); ++i)
    axpy(2.0 * lambda_theta, params.weights[i], grads.weights[i]);
  for (std::size_t i = 0; i < grads.biases.size(); ++i)
    for (std::size_t j = 0; j < grads.biases[i].size(); ++j)
      grads.biases[i][j] += 2.0 * lambda_theta * params.biases[i][j];
}

GradientSet hdmf_gradients(const BatchSpec& batch, const ModelParams& params,
                           const HyperParams& hp, const HdmfTraces& traces) {
  hp.validate();
  batch.validate();
  const std::size_t k = params.arch.depth();
  if (traces.user.activations.size() != 2 * k + 1 ||
      traces.item.activations.size() != 2 * k + 1)
    throw std::invalid_argument("traces do not match the architecture");

  const DenseMatrix& codes_u = traces.user.activations[k];
  const DenseMatrix& codes_v = traces.item.activations[k];
  auto [grad_codes_u, grad_codes_v] = residual_code_gradients(
      codes_u, codes_v, batch.pairs, 1.0 - hp.lambda_theta - hp.lambda_e);

  GradientSet grads = tower_backprop(params, traces.user, grad_codes_u, hp.lambda_e);
  grads.accumulate(tower_backprop(params, traces.item, grad_codes_v, hp.lambda_e));
  add_regularizer_gradient(grads, params, hp.lambda_theta);
  return grads;
}

GradientCheckReport check_gradients(const Architecture& arch, std::uint64_t seed,
                                    double tolerance, const GradientCheckSpec& spec) {
  arch.validate();
  spec.hp.validate();

  ModelParams params = init_params(arch, seed, spec.init_stddev);
  if (params.parameter_count() > 500)
    throw ConfigError("gradient check is limited to tiny models (<= 500 parameters)");

  Rng rng(seed + 0x9e3779b97f4a7c15ull);
  BatchSpec batch;
  batch.user_columns = DenseMatrix(arch.input_dim, spec.users);
  batch.item_columns = DenseMatrix(arch.input_dim, spec.items);
  for (double& v : batch.user_columns.values()) v = rng.uniform();
  for (double& v : batch.item_columns.values()) v = rng.uniform();
  for (std::size_t i = 0; i < spec.pairs; ++i) {
    batch.pairs.push_back(RatedPair{static_cast<std::size_t>(rng.below(spec.users)),
                                    static_cast<std::size_t>(rng.below(spec.items)),
                                    static_cast<double>(1 + rng.below(3))});
  }

  HdmfTraces traces;
  hdmf_loss(batch, params, spec.hp, &traces);
  const GradientSet analytic = hdmf_gradients(batch, params, spec.hp, traces);

  GradientCheckReport report;
  auto probe = [&](double& coord) {
    const double saved = coord;
    coord = saved + spec.epsilon;
    const double plus = hdmf_loss(batch, params, spec.hp);
    coord = saved - spec.epsilon;
    const double minus = hdmf_loss(batch, params, spec.hp);
    coord = saved;
    return (plus - minus) / (2.0 * spec.epsilon);
  };
  auto compare = [&](const std::string& name, std::size_t index, double a, double n) {
    ++report.coordinates;
    const double diff = std::abs(a - n);
    const double scale = std::max(std::abs(a), std::abs(n));
    const double rel = scale > 0.0 ? diff / scale : 0.0;
    report.max_rel_error = std::max(report.max_rel_error, rel);
    if (diff > spec.abs_floor && rel > tolerance)
      report.failures.push_back(CoordinateError{name, index, a, n, rel});
  };

  for (std::size_t w = 0; w < params.weights.size(); ++w) {
    const std::string name = "W" + std::to_string(w + 1);
    for (std::size_t i = 0; i < params.weights[w].size(); ++i)
      compare(name, i, analytic.weights[w].values()[i], probe(params.weights[w].values()[i]));
  }
  for (std::size_t b = 0; b < params.biases.size(); ++b) {
    const std::string name = "b" + std::to_string(b + 1);
    for (std::size_t i = 0; i < params.biases[b].size(); ++i)
      compare(name, i, analytic.biases[b][i], probe(params.biases[b][i]));
  }
  return report;
}

}  // namespace hdmf
