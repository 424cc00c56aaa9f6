#pragma once

#include <functional>
#include <vector>

#include "ctg/seqmodel/model.hpp"

namespace ctg {

struct TrainConfig {
  enum class Optimizer { Sgd, Adam };
  Optimizer optimizer = Optimizer::Adam;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  double clip_norm = 5.0;
  std::uint64_t shuffle_seed = 1;

  void validate() const;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainReport {
  /// Token-weighted mean loss of each epoch, measured during the epoch.
  std::vector<double> epoch_loss;
  std::size_t steps = 0;
};

/// Called after every epoch with its index and mean loss; return false to
/// stop early.
using EpochCallback = std::function<bool(std::size_t epoch, double loss)>;

/// Mini-batch training with global gradient-norm clipping. Deterministic
/// for fixed seeds. Throws TrainingDiverged when the loss or a parameter
/// becomes non-finite.
TrainReport train(SeqModel& m, const std::vector<SeqPair>& corpus, const TrainConfig& tc,
                  const EpochCallback& on_epoch = {});

double global_norm(const Params& g);

/// One optimizer in isolation, for tests and custom loops.
class Optimizer {
 public:
  Optimizer(const TrainConfig& tc, const Params& shape);
  void step(Params& params, const Params& grad);

 private:
  TrainConfig tc_;
  Params m_, v_;
  std::size_t t_ = 0;
};

}  // namespace ctg
