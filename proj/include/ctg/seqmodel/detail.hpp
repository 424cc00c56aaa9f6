#pragma once

// Building blocks shared by training and decoding.

#include <vector>

#include "ctg/seqmodel/model.hpp"

namespace ctg {

namespace detail {

using Row = Eigen::RowVectorXd;

struct GruStep {
  Mat x, h_prev, z, r, n, ghn;
  Row mask;
};

struct Attention {
  Mat alpha;     // source positions x batch
  Mat context;   // hidden x batch
  Mat concat;    // [context; top]
  Mat combined;  // tanh(W_c concat + b_c)
};

struct DecoderStep {
  std::vector<std::int32_t> in, out;
  Row mask;
  Mat top;
  Attention attention;
  Mat probs;
};

Mat sigmoid(const Mat& a);
/// One masked step: columns with mask 0 keep their previous state.
Mat gru_forward(const GruParams& p, const Mat& x, const Mat& h_prev, const Row& mask, GruStep* st);
/// Accumulates parameter gradients into `g`.
void gru_backward(const GruParams& p, const GruStep& st, const Mat& dh, GruParams& g, Mat& dx, Mat& dh_prev);
Mat gather(const Mat& embedding, const std::vector<std::int32_t>& ids);
Mat log_softmax(const Mat& logits);
Attention attend(const Params& p, const Mat& top, const std::vector<Mat>& enc_out, const std::vector<Mat>& keys,
                 const Mat& src_valid);
Mat output_logits(const Params& p, const Mat& feature);

}  // namespace detail

struct ForwardCache {
  std::size_t batch = 0;
  std::size_t count = 0;
  std::vector<std::vector<std::int32_t>> src_ids;
  Mat src_valid;
  std::vector<std::vector<detail::GruStep>> enc, dec;
  std::vector<Mat> enc_out, keys;
  std::vector<detail::DecoderStep> steps;
};

}  // namespace ctg
