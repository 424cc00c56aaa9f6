#include "ctg/guidance/model_scorer.hpp"

#include <limits>

#include "ctg/seqmodel/decode.hpp"

namespace ctg {

ModelClauseScorer::ModelClauseScorer(std::shared_ptr<const SeqModel> model, ExtractOptions opts)
    : model_(std::move(model)), opts_(std::move(opts)) {
  if (!model_) throw std::invalid_argument("model scorer needs a model");
}

std::vector<double> ModelClauseScorer::score(const Matrix& m, std::span<const Literal> path,
                                             std::span<const std::string> clause_names) const {
  const Tokens source = literal_path_tokens({path.begin(), path.end()}, m.symbols(), opts_);
  DecoderSession session(*model_, model_->src_vocab.encode(source));
  const Eigen::VectorXd lp = session.log_probs(session.start());
  std::vector<double> out;
  out.reserve(clause_names.size());
  for (const auto& name : clause_names) {
    out.push_back(model_->tgt_vocab.contains(name) ? lp(model_->tgt_vocab.id(name))
                                                   : std::numeric_limits<double>::lowest());
  }
  return out;
}

}  // namespace ctg
