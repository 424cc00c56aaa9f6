#include "ctg/seqmodel/train.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace ctg {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0) || batch_size == 0 || !(clip_norm > 0)) {
    throw std::invalid_argument("invalid training configuration");
  }
}

double global_norm(const Params& g) {
  double sq = 0;
  g.visit([&sq](const std::string&, const Mat& t) { sq += t.squaredNorm(); });
  return std::sqrt(sq);
}

Optimizer::Optimizer(const TrainConfig& tc, const Params& shape) : tc_(tc) {
  if (tc.optimizer == TrainConfig::Optimizer::Adam) {
    m_ = shape.zeros_like();
    v_ = shape.zeros_like();
  }
}

void Optimizer::step(Params& params, const Params& grad) {
  const double lr = tc_.learning_rate;
  if (tc_.optimizer == TrainConfig::Optimizer::Sgd) {
    std::vector<const Mat*> gs;
    grad.visit([&gs](const std::string&, const Mat& t) { gs.push_back(&t); });
    std::size_t i = 0;
    params.visit([&](const std::string&, Mat& t) { t -= lr * *gs[i++]; });
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ++t_;
  const double c1 = 1 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1 - std::pow(b2, static_cast<double>(t_));
  std::vector<const Mat*> gs;
  std::vector<Mat*> ms, vs;
  grad.visit([&gs](const std::string&, const Mat& t) { gs.push_back(&t); });
  m_.visit([&ms](const std::string&, Mat& t) { ms.push_back(&t); });
  v_.visit([&vs](const std::string&, Mat& t) { vs.push_back(&t); });
  std::size_t i = 0;
  params.visit([&](const std::string&, Mat& t) {
    Mat& m = *ms[i];
    Mat& v = *vs[i];
    const Mat& g = *gs[i];
    ++i;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g.cwiseProduct(g);
    t.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  });
}

TrainReport train(SeqModel& m, const std::vector<SeqPair>& corpus, const TrainConfig& tc, const EpochCallback& on_epoch) {
  tc.validate();
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  Optimizer opt(tc, m.params);
  std::mt19937_64 rng(tc.shuffle_seed);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  TrainReport report;
  std::vector<SeqPair> batch;
  for (std::size_t epoch = 0; epoch < tc.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    double loss_sum = 0;
    std::size_t tokens = 0;
    for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
      batch.clear();
      for (std::size_t j = start; j < std::min(order.size(), start + tc.batch_size); ++j) batch.push_back(corpus[order[j]]);
      ForwardResult f = forward_loss(m, batch);
      if (!std::isfinite(f.loss)) {
        throw TrainingDiverged("loss became non-finite in epoch " + std::to_string(epoch + 1) + " at step " +
                               std::to_string(report.steps + 1));
      }
      loss_sum += f.loss * static_cast<double>(f.tokens);
      tokens += f.tokens;
      if (f.tokens == 0) continue;
      Params g = backward(m, f);
      const double norm = global_norm(g);
      if (!std::isfinite(norm)) throw TrainingDiverged("gradient became non-finite at step " + std::to_string(report.steps + 1));
      if (norm > tc.clip_norm) {
        const double s = tc.clip_norm / norm;
        g.visit([s](const std::string&, Mat& t) { t *= s; });
      }
      opt.step(m.params, g);
      ++report.steps;
    }
    if (!m.params.all_finite()) throw TrainingDiverged("parameters became non-finite in epoch " + std::to_string(epoch + 1));
    const double mean = tokens ? loss_sum / static_cast<double>(tokens) : 0.0;
    report.epoch_loss.push_back(mean);
    if (on_epoch && !on_epoch(epoch, mean)) break;
  }
  return report;
}

}  // namespace ctg
