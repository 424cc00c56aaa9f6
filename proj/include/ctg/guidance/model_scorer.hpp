#pragma once

#include <memory>

#include "ctg/datagen/examples.hpp"
#include "ctg/seqmodel/model.hpp"
#include "ctg/tableau/prover.hpp"

namespace ctg {

/// Scores a candidate clause by the log-probability the model gives its
/// name as the first output token for the normalized literal path.
/// Clause names outside the target vocabulary score lowest.
class ModelClauseScorer : public ClauseScorer {
 public:
  explicit ModelClauseScorer(std::shared_ptr<const SeqModel> model, ExtractOptions opts = {});

  std::vector<double> score(const Matrix& m, std::span<const Literal> path,
                            std::span<const std::string> clause_names) const override;

 private:
  std::shared_ptr<const SeqModel> model_;
  ExtractOptions opts_;
};

}  // namespace ctg
