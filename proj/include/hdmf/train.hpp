#ifndef HDMF_TRAIN_HPP
#define HDMF_TRAIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdmf/autoencoder.hpp"
#include "hdmf/folksonomy.hpp"
#include "hdmf/objective.hpp"

namespace hdmf {

struct TrainConfig {
  double learning_rate = 0.002;
  std::size_t max_epochs = 500;
  std::size_t batch_pairs = 512;
  std::size_t early_stop_patience = 5;  // evaluations without improvement
  std::size_t eval_every = 1;           // epochs between validation passes
  std::uint64_t seed = 0;
  HyperParams hp;
  std::vector<std::size_t> hidden_sizes = {2000, 300, 128, 300, 2000};
  double init_stddev = 0.1;
  double grad_clip = 1e3;         // per-batch gradient L2 clip
  double convergence_tol = 1e-6;  // relative training-loss change per epoch
  bool untied_towers = false;
  bool binarize_ratings = false;

  // MF baseline
  std::size_t mf_latent_dim = 128;
  double mf_lambda = 0.01;

  void validate() const;
};

// Trained autoencoder pair. In the default tied mode both towers share
// `params`; untied mode carries a second parameter set for the item tower.
struct HdmfModel {
  ModelParams params;
  std::optional<ModelParams> item_params;

  bool tied() const { return !item_params.has_value(); }
  const ModelParams& user_tower() const { return params; }
  const ModelParams& item_tower() const { return item_params ? *item_params : params; }
};

// Plain matrix-factorization baseline: R ~ user_factors * item_factors^T.
struct MfModel {
  DenseMatrix user_factors;  // |U| x k
  DenseMatrix item_factors;  // |D| x k
  std::size_t latent_dim = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;    // 1-based
  double train_loss = 0.0;  // summed batch losses
  double val_mrr = -1.0;    // -1 when this epoch ran no validation pass
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  std::string stop_reason;
  std::size_t clip_events = 0;
  double best_val_mrr = -1.0;
  std::size_t best_epoch = 0;
};

void write_train_log(const std::string& path, const TrainLog& log);

std::pair<HdmfModel, TrainLog> train_hdmf(const SplitFolksonomy& data, const TrainConfig& cfg);

std::pair<MfModel, TrainLog> train_mf(const RatingMatrix& ratings, std::size_t latent_dim,
                                      const TrainConfig& cfg);

// MF variant that also runs the validation-MRR early-stopping protocol.
std::pair<MfModel, TrainLog> train_mf_on_split(const SplitFolksonomy& data,
                                               const TrainConfig& cfg);

}  // namespace hdmf

#endif
