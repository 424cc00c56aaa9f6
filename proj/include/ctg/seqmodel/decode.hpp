#pragma once

#include <vector>

#include "ctg/seqmodel/model.hpp"

namespace ctg {

struct BeamHypothesis {
  std::vector<std::int32_t> ids;
  /// Sum of the log-probabilities of the emitted tokens.
  double score = 0;
  /// Ends with </s>.
  bool complete = false;
};

struct BeamOptions {
  std::size_t width = 1;
  /// Tokens emitted per hypothesis, </s> included.
  std::size_t max_length = 8;
  /// Rank final hypotheses by score per emitted token.
  bool length_normalize = false;
};

/// Incremental decoding for one source sequence.
class DecoderSession {
 public:
  DecoderSession(const SeqModel& m, const std::vector<std::int32_t>& src);

  /// Hidden state per decoder layer.
  using State = std::vector<Eigen::VectorXd>;

  /// State after feeding <s>.
  State start() const;
  State advance(const State& s, std::int32_t token) const;
  /// Log-distribution over the target vocabulary in state `s`.
  Eigen::VectorXd log_probs(const State& s) const;

 private:
  const SeqModel& m_;
  State final_;
  std::vector<Mat> enc_out_, keys_;
  Mat src_valid_;
};

/// Best-first hypotheses, at most `width`. Each step keeps the `width`
/// best expansions among live hypotheses; finished ones leave the beam.
/// Hypotheses still open at max_length are returned as incomplete. <pad>
/// and <s> are never emitted. Throws std::invalid_argument for width 0.
std::vector<BeamHypothesis> beam_decode(const SeqModel& m, const std::vector<std::int32_t>& src,
                                        const BeamOptions& opts);

/// Argmax at every step.
BeamHypothesis greedy_decode(const SeqModel& m, const std::vector<std::int32_t>& src, std::size_t max_length);

}  // namespace ctg
