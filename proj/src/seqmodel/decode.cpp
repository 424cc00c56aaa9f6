#include "ctg/seqmodel/decode.hpp"

#include <algorithm>
#include <limits>

#include "ctg/seqmodel/detail.hpp"

namespace ctg {

using namespace detail;

DecoderSession::DecoderSession(const SeqModel& m, const std::vector<std::int32_t>& src) : m_(m) {
  if (src.empty()) throw std::invalid_argument("empty source sequence");
  for (auto id : src) {
    if (id < 0 || static_cast<std::size_t>(id) >= m.config.src_vocab) throw std::invalid_argument("source id out of range");
  }
  const auto H = static_cast<Eigen::Index>(m.config.hidden);
  const Params& p = m.params;
  std::vector<Mat> h(m.config.layers, Mat::Zero(H, 1));
  const Row on = Row::Ones(1);
  for (auto id : src) {
    Mat x = p.src_embedding.col(id);
    for (std::size_t l = 0; l < h.size(); ++l) {
      h[l] = gru_forward(p.encoder[l], x, h[l], on, nullptr);
      x = h[l];
    }
    enc_out_.push_back(h.back());
    if (m.config.attention) keys_.push_back(p.attention_w * h.back());
  }
  src_valid_ = Mat::Ones(static_cast<Eigen::Index>(src.size()), 1);
  for (auto& s : h) final_.push_back(s.col(0));
}

DecoderSession::State DecoderSession::start() const { return advance(final_, Vocabulary::kBos); }

DecoderSession::State DecoderSession::advance(const State& s, std::int32_t token) const {
  const Params& p = m_.params;
  const Row on = Row::Ones(1);
  State out(s.size());
  Mat x = p.tgt_embedding.col(token);
  for (std::size_t l = 0; l < s.size(); ++l) {
    Mat h = gru_forward(p.decoder[l], x, s[l], on, nullptr);
    out[l] = h.col(0);
    x = std::move(h);
  }
  return out;
}

Eigen::VectorXd DecoderSession::log_probs(const State& s) const {
  const Mat top = s.back();
  Mat logits;
  if (m_.config.attention) {
    logits = output_logits(m_.params, attend(m_.params, top, enc_out_, keys_, src_valid_).combined);
  } else {
    logits = output_logits(m_.params, top);
  }
  return log_softmax(logits).col(0);
}

namespace {

bool emittable(std::int32_t id) { return id != Vocabulary::kPad && id != Vocabulary::kBos; }

double rank_score(const BeamHypothesis& h, bool normalize) {
  return normalize && !h.ids.empty() ? h.score / static_cast<double>(h.ids.size()) : h.score;
}

}  // namespace

std::vector<BeamHypothesis> beam_decode(const SeqModel& m, const std::vector<std::int32_t>& src,
                                        const BeamOptions& opts) {
  if (opts.width == 0) throw std::invalid_argument("beam width must be positive");
  DecoderSession session(m, src);
  struct Live {
    BeamHypothesis hyp;
    DecoderSession::State state;
  };
  std::vector<Live> live{{BeamHypothesis{}, session.start()}};
  std::vector<BeamHypothesis> done;

  for (std::size_t step = 0; step < opts.max_length && !live.empty(); ++step) {
    struct Expansion {
      double score;
      std::size_t parent;
      std::int32_t token;
    };
    std::vector<Expansion> cands;
    for (std::size_t i = 0; i < live.size(); ++i) {
      const Eigen::VectorXd lp = session.log_probs(live[i].state);
      for (Eigen::Index v = 0; v < lp.size(); ++v) {
        const auto id = static_cast<std::int32_t>(v);
        if (emittable(id)) cands.push_back({live[i].hyp.score + lp(v), i, id});
      }
    }
    const std::size_t keep = std::min(opts.width, cands.size());
    // Ties resolve toward the earlier parent, then the smaller token id.
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const Expansion& a, const Expansion& b) {
                        if (a.score != b.score) return a.score > b.score;
                        if (a.parent != b.parent) return a.parent < b.parent;
                        return a.token < b.token;
                      });
    std::vector<Live> next;
    for (std::size_t j = 0; j < keep; ++j) {
      const Expansion& e = cands[j];
      BeamHypothesis h = live[e.parent].hyp;
      h.ids.push_back(e.token);
      h.score = e.score;
      if (e.token == Vocabulary::kEos) {
        h.complete = true;
        done.push_back(std::move(h));
      } else {
        DecoderSession::State s = step + 1 < opts.max_length ? session.advance(live[e.parent].state, e.token)
                                                             : DecoderSession::State{};
        next.push_back({std::move(h), std::move(s)});
      }
    }
    live = std::move(next);
  }
  for (auto& l : live) done.push_back(std::move(l.hyp));
  std::stable_sort(done.begin(), done.end(), [&](const BeamHypothesis& a, const BeamHypothesis& b) {
    return rank_score(a, opts.length_normalize) > rank_score(b, opts.length_normalize);
  });
  if (done.size() > opts.width) done.resize(opts.width);
  return done;
}

BeamHypothesis greedy_decode(const SeqModel& m, const std::vector<std::int32_t>& src, std::size_t max_length) {
  DecoderSession session(m, src);
  BeamHypothesis h;
  DecoderSession::State s = session.start();
  for (std::size_t step = 0; step < max_length; ++step) {
    const Eigen::VectorXd lp = session.log_probs(s);
    std::int32_t best = -1;
    for (Eigen::Index v = 0; v < lp.size(); ++v) {
      const auto id = static_cast<std::int32_t>(v);
      if (emittable(id) && (best < 0 || lp(v) > lp(best))) best = id;
    }
    h.ids.push_back(best);
    h.score += lp(best);
    if (best == Vocabulary::kEos) {
      h.complete = true;
      break;
    }
    s = session.advance(s, best);
  }
  return h;
}

}  // namespace ctg
