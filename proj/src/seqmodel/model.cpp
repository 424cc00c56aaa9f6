#include "ctg/seqmodel/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ctg/seqmodel/detail.hpp"

namespace ctg {

void ModelConfig::validate() const {
  if (src_vocab == 0 || tgt_vocab == 0 || embed == 0 || hidden == 0 || layers == 0) {
    throw std::invalid_argument("model dimensions must be positive");
  }
}

Params Params::zeros_like() const {
  Params out = *this;
  out.visit([](const std::string&, Mat& t) { t.setZero(); });
  return out;
}

std::size_t Params::parameter_count() const {
  std::size_t n = 0;
  visit([&n](const std::string&, const Mat& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

bool Params::all_finite() const {
  bool ok = true;
  visit([&ok](const std::string&, const Mat& t) { ok = ok && t.allFinite(); });
  return ok;
}

void SeqModel::require_vocab(const Vocabulary& src, const Vocabulary& tgt) const {
  if (!(src == src_vocab)) throw VocabMismatch("source vocabulary does not match the model's");
  if (!(tgt == tgt_vocab)) throw VocabMismatch("target vocabulary does not match the model's");
}

SeqModel init_model(ModelConfig cfg, Vocabulary src, Vocabulary tgt) {
  cfg.src_vocab = src.size();
  cfg.tgt_vocab = tgt.size();
  cfg.validate();
  const auto E = static_cast<Eigen::Index>(cfg.embed);
  const auto H = static_cast<Eigen::Index>(cfg.hidden);
  Params p;
  p.src_embedding.resize(E, static_cast<Eigen::Index>(cfg.src_vocab));
  p.tgt_embedding.resize(E, static_cast<Eigen::Index>(cfg.tgt_vocab));
  auto gru = [H](Eigen::Index in) {
    GruParams g;
    g.w_input.resize(3 * H, in);
    g.w_hidden.resize(3 * H, H);
    g.b_input.resize(3 * H, 1);
    g.b_hidden.resize(3 * H, 1);
    return g;
  };
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    p.encoder.push_back(gru(l == 0 ? E : H));
    p.decoder.push_back(gru(l == 0 ? E : H));
  }
  if (cfg.attention) {
    p.attention_w.resize(H, H);
    p.attention_combine_w.resize(H, 2 * H);
    p.attention_combine_b.resize(H, 1);
  }
  p.output_w.resize(static_cast<Eigen::Index>(cfg.tgt_vocab), H);
  p.output_b.resize(static_cast<Eigen::Index>(cfg.tgt_vocab), 1);

  std::mt19937_64 rng(cfg.seed);
  const double s = 1.0 / std::sqrt(static_cast<double>(cfg.hidden));
  p.visit([&](const std::string&, Mat& t) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        t(i, j) = (2 * u - 1) * s;
      }
    }
  });
  return SeqModel{cfg, std::move(p), std::move(src), std::move(tgt)};
}

SeqPair encode_pair(const SeqModel& m, const Tokens& source, const Tokens& target) {
  return SeqPair{m.src_vocab.encode(source), m.tgt_vocab.encode(target)};
}

namespace detail {

Mat sigmoid(const Mat& a) { return (1.0 / (1.0 + (-a.array()).exp())).matrix(); }

Mat gru_forward(const GruParams& p, const Mat& x, const Mat& h_prev, const Row& mask, GruStep* st) {
  const Eigen::Index H = h_prev.rows();
  Mat gi = p.w_input * x;
  gi.colwise() += p.b_input.col(0);
  Mat gh = p.w_hidden * h_prev;
  gh.colwise() += p.b_hidden.col(0);
  Mat z = sigmoid(gi.topRows(H) + gh.topRows(H));
  Mat r = sigmoid(gi.middleRows(H, H) + gh.middleRows(H, H));
  Mat ghn = gh.bottomRows(H);
  Mat n = (gi.bottomRows(H).array() + r.array() * ghn.array()).tanh().matrix();
  Mat h_new = ((1 - z.array()) * n.array() + z.array() * h_prev.array()).matrix();
  Mat h = (h_new.array().rowwise() * mask.array() + h_prev.array().rowwise() * (1 - mask.array())).matrix();
  if (st) {
    st->x = x;
    st->h_prev = h_prev;
    st->z = std::move(z);
    st->r = std::move(r);
    st->n = std::move(n);
    st->ghn = std::move(ghn);
    st->mask = mask;
  }
  return h;
}

void gru_backward(const GruParams& p, const GruStep& st, const Mat& dh, GruParams& g, Mat& dx, Mat& dh_prev) {
  const Eigen::Index H = st.h_prev.rows();
  const Eigen::Index B = st.h_prev.cols();
  const Mat dhn = (dh.array().rowwise() * st.mask.array()).matrix();
  dh_prev = (dh.array().rowwise() * (1 - st.mask.array())).matrix();
  const auto z = st.z.array();
  const auto r = st.r.array();
  const auto n = st.n.array();
  const Eigen::ArrayXXd dn = dhn.array() * (1 - z);
  const Eigen::ArrayXXd dz = dhn.array() * (st.h_prev.array() - n);
  dh_prev.array() += dhn.array() * z;
  const Eigen::ArrayXXd da_n = dn * (1 - n * n);
  const Eigen::ArrayXXd dr = da_n * st.ghn.array();
  const Eigen::ArrayXXd da_z = dz * z * (1 - z);
  const Eigen::ArrayXXd da_r = dr * r * (1 - r);
  Mat dgi(3 * H, B), dgh(3 * H, B);
  dgi.topRows(H) = da_z.matrix();
  dgi.middleRows(H, H) = da_r.matrix();
  dgi.bottomRows(H) = da_n.matrix();
  dgh.topRows(H) = da_z.matrix();
  dgh.middleRows(H, H) = da_r.matrix();
  dgh.bottomRows(H) = (da_n * r).matrix();
  g.w_input.noalias() += dgi * st.x.transpose();
  g.b_input += dgi.rowwise().sum();
  dx.noalias() = p.w_input.transpose() * dgi;
  g.w_hidden.noalias() += dgh * st.h_prev.transpose();
  g.b_hidden += dgh.rowwise().sum();
  dh_prev.noalias() += p.w_hidden.transpose() * dgh;
}

Mat gather(const Mat& embedding, const std::vector<std::int32_t>& ids) {
  Mat out(embedding.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t b = 0; b < ids.size(); ++b) out.col(static_cast<Eigen::Index>(b)) = embedding.col(ids[b]);
  return out;
}

Mat log_softmax(const Mat& logits) {
  Mat out = logits;
  for (Eigen::Index b = 0; b < out.cols(); ++b) {
    const double mx = out.col(b).maxCoeff();
    const double lse = mx + std::log((out.col(b).array() - mx).exp().sum());
    out.col(b).array() -= lse;
  }
  return out;
}

Attention attend(const Params& p, const Mat& top, const std::vector<Mat>& enc_out, const std::vector<Mat>& keys,
                 const Mat& src_valid) {
  const Eigen::Index S = static_cast<Eigen::Index>(enc_out.size());
  const Eigen::Index B = top.cols();
  Attention a;
  a.alpha.resize(S, B);
  for (Eigen::Index s = 0; s < S; ++s) {
    a.alpha.row(s) = (top.array() * keys[static_cast<std::size_t>(s)].array()).colwise().sum();
  }
  for (Eigen::Index b = 0; b < B; ++b) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index s = 0; s < S; ++s) {
      if (src_valid(s, b) > 0) mx = std::max(mx, a.alpha(s, b));
    }
    double sum = 0;
    for (Eigen::Index s = 0; s < S; ++s) {
      const double e = src_valid(s, b) > 0 ? std::exp(a.alpha(s, b) - mx) : 0.0;
      a.alpha(s, b) = e;
      sum += e;
    }
    a.alpha.col(b) /= sum;
  }
  a.context = Mat::Zero(top.rows(), B);
  for (Eigen::Index s = 0; s < S; ++s) {
    a.context.array() += enc_out[static_cast<std::size_t>(s)].array().rowwise() * a.alpha.row(s).array();
  }
  a.concat.resize(2 * top.rows(), B);
  a.concat.topRows(top.rows()) = a.context;
  a.concat.bottomRows(top.rows()) = top;
  Mat u = p.attention_combine_w * a.concat;
  u.colwise() += p.attention_combine_b.col(0);
  a.combined = u.array().tanh().matrix();
  return a;
}

Mat output_logits(const Params& p, const Mat& feature) {
  Mat logits = p.output_w * feature;
  logits.colwise() += p.output_b.col(0);
  return logits;
}

}  // namespace detail

using namespace detail;

ForwardResult forward_loss(const SeqModel& m, std::span<const SeqPair> batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const Params& p = m.params;
  const std::size_t L = m.config.layers;
  const auto H = static_cast<Eigen::Index>(m.config.hidden);
  const std::size_t B = batch.size();
  auto cache = std::make_shared<ForwardCache>();
  ForwardCache& c = *cache;
  c.batch = B;

  std::size_t S = 0, T = 0;
  for (const auto& pr : batch) {
    if (pr.src.empty()) throw std::invalid_argument("empty source sequence");
    for (auto id : pr.src) {
      if (id < 0 || static_cast<std::size_t>(id) >= m.config.src_vocab) throw std::invalid_argument("source id out of range");
    }
    for (auto id : pr.tgt) {
      if (id < 0 || static_cast<std::size_t>(id) >= m.config.tgt_vocab) throw std::invalid_argument("target id out of range");
    }
    S = std::max(S, pr.src.size());
    if (!pr.tgt.empty()) T = std::max(T, pr.tgt.size() + 1);
  }

  // Encoder.
  std::vector<Mat> h(L, Mat::Zero(H, static_cast<Eigen::Index>(B)));
  c.enc.assign(L, std::vector<GruStep>(S));
  c.src_valid = Mat::Zero(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(B));
  for (std::size_t t = 0; t < S; ++t) {
    std::vector<std::int32_t> ids(B, Vocabulary::kPad);
    Row mask = Row::Zero(static_cast<Eigen::Index>(B));
    for (std::size_t b = 0; b < B; ++b) {
      if (t < batch[b].src.size()) {
        ids[b] = batch[b].src[t];
        mask(static_cast<Eigen::Index>(b)) = 1;
        c.src_valid(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(b)) = 1;
      }
    }
    c.src_ids.push_back(ids);
    Mat x = gather(p.src_embedding, ids);
    for (std::size_t l = 0; l < L; ++l) {
      h[l] = gru_forward(p.encoder[l], x, h[l], mask, &c.enc[l][t]);
      x = h[l];
    }
    c.enc_out.push_back(h[L - 1]);
  }
  if (m.config.attention) {
    for (const auto& e : c.enc_out) c.keys.push_back(p.attention_w * e);
  }

  // Decoder.
  c.dec.assign(L, std::vector<GruStep>(T));
  ForwardResult result;
  double total = 0;
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<std::int32_t> in(B, Vocabulary::kPad), out(B, Vocabulary::kPad);
    Row mask = Row::Zero(static_cast<Eigen::Index>(B));
    for (std::size_t b = 0; b < B; ++b) {
      const auto& tgt = batch[b].tgt;
      if (tgt.empty() || t > tgt.size()) continue;
      in[b] = t == 0 ? Vocabulary::kBos : tgt[t - 1];
      out[b] = t < tgt.size() ? tgt[t] : Vocabulary::kEos;
      mask(static_cast<Eigen::Index>(b)) = 1;
    }
    Mat x = gather(p.tgt_embedding, in);
    for (std::size_t l = 0; l < L; ++l) {
      h[l] = gru_forward(p.decoder[l], x, h[l], mask, &c.dec[l][t]);
      x = h[l];
    }
    DecoderStep step;
    step.in = std::move(in);
    step.out = std::move(out);
    step.mask = mask;
    step.top = h[L - 1];
    if (m.config.attention) {
      step.attention = attend(p, step.top, c.enc_out, c.keys, c.src_valid);
      step.probs = log_softmax(output_logits(p, step.attention.combined));
    } else {
      step.probs = log_softmax(output_logits(p, step.top));
    }
    for (std::size_t b = 0; b < B; ++b) {
      if (mask(static_cast<Eigen::Index>(b)) == 0) continue;
      total -= step.probs(step.out[b], static_cast<Eigen::Index>(b));
      ++result.tokens;
    }
    step.probs = step.probs.array().exp().matrix();
    c.steps.push_back(std::move(step));
  }
  c.count = result.tokens;
  result.loss = result.tokens ? total / static_cast<double>(result.tokens) : 0.0;
  result.cache = std::move(cache);
  return result;
}

Params backward(const SeqModel& m, const ForwardResult& f) {
  if (!f.cache) throw std::invalid_argument("backward needs a forward cache");
  const ForwardCache& c = *f.cache;
  const Params& p = m.params;
  Params g = p.zeros_like();
  const std::size_t L = m.config.layers;
  const auto H = static_cast<Eigen::Index>(m.config.hidden);
  const auto B = static_cast<Eigen::Index>(c.batch);
  if (c.dec.size() != L || c.enc.size() != L || (m.config.attention && c.keys.size() != c.enc_out.size())) {
    throw std::invalid_argument("forward cache does not match the model");
  }
  const std::size_t S = c.enc_out.size();
  const std::size_t T = c.steps.size();

  std::vector<Mat> carry(L, Mat::Zero(H, B));
  std::vector<Mat> d_enc(S, Mat::Zero(H, B));
  std::vector<Mat> d_keys(m.config.attention ? S : 0, Mat::Zero(H, B));
  const double scale = c.count ? 1.0 / static_cast<double>(c.count) : 0.0;

  for (std::size_t t = T; t-- > 0;) {
    const DecoderStep& st = c.steps[t];
    Mat dlogits = st.probs;
    for (Eigen::Index b = 0; b < B; ++b) {
      if (st.mask(b) == 0) {
        dlogits.col(b).setZero();
        continue;
      }
      dlogits(st.out[static_cast<std::size_t>(b)], b) -= 1.0;
      dlogits.col(b) *= scale;
    }
    const Mat& feature = m.config.attention ? st.attention.combined : st.top;
    g.output_w.noalias() += dlogits * feature.transpose();
    g.output_b += dlogits.rowwise().sum();
    Mat dfeature = p.output_w.transpose() * dlogits;
    Mat dtop;
    if (m.config.attention) {
      const Attention& a = st.attention;
      const Mat du = (dfeature.array() * (1 - a.combined.array().square())).matrix();
      g.attention_combine_w.noalias() += du * a.concat.transpose();
      g.attention_combine_b += du.rowwise().sum();
      const Mat dconcat = p.attention_combine_w.transpose() * du;
      const Mat dcontext = dconcat.topRows(H);
      dtop = dconcat.bottomRows(H);
      Mat dalpha(static_cast<Eigen::Index>(S), B);
      for (std::size_t s = 0; s < S; ++s) {
        const auto si = static_cast<Eigen::Index>(s);
        dalpha.row(si) = (dcontext.array() * c.enc_out[s].array()).colwise().sum();
        d_enc[s].array() += dcontext.array().rowwise() * a.alpha.row(si).array();
      }
      const Row weighted = (a.alpha.array() * dalpha.array()).colwise().sum();
      const Mat dscore = (a.alpha.array() * (dalpha.array().rowwise() - weighted.array())).matrix();
      for (std::size_t s = 0; s < S; ++s) {
        const auto si = static_cast<Eigen::Index>(s);
        dtop.array() += c.keys[s].array().rowwise() * dscore.row(si).array();
        d_keys[s].array() += st.top.array().rowwise() * dscore.row(si).array();
      }
    } else {
      dtop = std::move(dfeature);
    }

    Mat dh = dtop + carry[L - 1];
    for (std::size_t l = L; l-- > 0;) {
      Mat dx, dh_prev;
      gru_backward(p.decoder[l], c.dec[l][t], dh, g.decoder[l], dx, dh_prev);
      carry[l] = std::move(dh_prev);
      if (l > 0) {
        dh = dx + carry[l - 1];
      } else {
        for (Eigen::Index b = 0; b < B; ++b) g.tgt_embedding.col(st.in[static_cast<std::size_t>(b)]) += dx.col(b);
      }
    }
  }

  if (m.config.attention) {
    for (std::size_t s = 0; s < S; ++s) {
      g.attention_w.noalias() += d_keys[s] * c.enc_out[s].transpose();
      d_enc[s].noalias() += p.attention_w.transpose() * d_keys[s];
    }
  }

  for (std::size_t t = S; t-- > 0;) {
    Mat dh = d_enc[t] + carry[L - 1];
    for (std::size_t l = L; l-- > 0;) {
      Mat dx, dh_prev;
      gru_backward(p.encoder[l], c.enc[l][t], dh, g.encoder[l], dx, dh_prev);
      carry[l] = std::move(dh_prev);
      if (l > 0) {
        dh = dx + carry[l - 1];
      } else {
        for (Eigen::Index b = 0; b < B; ++b) g.src_embedding.col(c.src_ids[t][static_cast<std::size_t>(b)]) += dx.col(b);
      }
    }
  }
  return g;
}

std::vector<double> token_log_probs(const SeqModel& m, const SeqPair& pair) {
  SeqPair supervised = pair;
  const bool empty = supervised.tgt.empty();
  // An empty target is unsupervised in training; here it still scores </s>.
  if (empty) supervised.tgt.push_back(Vocabulary::kEos);
  auto f = forward_loss(m, std::span<const SeqPair>(&supervised, 1));
  std::vector<double> out;
  for (const auto& st : f.cache->steps) out.push_back(std::log(st.probs(st.out[0], 0)));
  if (empty) out.resize(1);
  return out;
}

GradientCheck gradient_check(const SeqModel& m, std::span<const SeqPair> batch, double eps) {
  const Params analytic = backward(m, forward_loss(m, batch));
  std::vector<const Mat*> grads;
  analytic.visit([&grads](const std::string&, const Mat& t) { grads.push_back(&t); });
  SeqModel probe = m;
  GradientCheck out;
  std::size_t k = 0;
  probe.params.visit([&](const std::string& name, Mat& t) {
    const Mat& g = *grads[k++];
    double worst = 0;
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const double saved = t(i, j);
        t(i, j) = saved + eps;
        const double up = forward_loss(probe, batch).loss;
        t(i, j) = saved - eps;
        const double down = forward_loss(probe, batch).loss;
        t(i, j) = saved;
        const double numeric = (up - down) / (2 * eps);
        const double a = g(i, j);
        const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
        worst = std::max(worst, rel);
        ++out.entries;
      }
    }
    out.per_tensor.emplace_back(name, worst);
    if (worst >= out.max_relative_error) {
      out.max_relative_error = worst;
      out.worst_tensor = name;
    }
  });
  return out;
}

}  // namespace ctg
