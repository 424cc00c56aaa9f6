#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ctg/datagen/vocab.hpp"

namespace ctg {

using Mat = Eigen::MatrixXd;

struct ModelConfig {
  std::size_t src_vocab = 0;
  std::size_t tgt_vocab = 0;
  std::size_t embed = 64;
  std::size_t hidden = 128;
  /// Stacked recurrent layers on each side.
  std::size_t layers = 1;
  bool attention = true;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument when a size is zero.
  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Gates are stacked [update; reset; candidate] along the rows.
struct GruParams {
  Mat w_input, w_hidden, b_input, b_hidden;
};

/// Every trainable tensor. Embeddings store one column per token; biases
/// are column vectors. The attention tensors are empty without attention.
struct Params {
  Mat src_embedding, tgt_embedding;
  std::vector<GruParams> encoder, decoder;
  Mat attention_w, attention_combine_w, attention_combine_b;
  Mat output_w, output_b;

  /// Calls f(name, tensor) for every tensor in a fixed order.
  template <class F>
  void visit(F&& f) {
    visit_impl(*this, f);
  }
  template <class F>
  void visit(F&& f) const {
    visit_impl(*this, f);
  }

  /// Same shapes, all zeros.
  Params zeros_like() const;
  std::size_t parameter_count() const;
  bool all_finite() const;

 private:
  template <class Self, class F>
  static void visit_impl(Self& self, F& f) {
    f("src_embedding", self.src_embedding);
    f("tgt_embedding", self.tgt_embedding);
    for (std::size_t l = 0; l < self.encoder.size(); ++l) visit_gru(f, "encoder.l" + std::to_string(l), self.encoder[l]);
    for (std::size_t l = 0; l < self.decoder.size(); ++l) visit_gru(f, "decoder.l" + std::to_string(l), self.decoder[l]);
    if (self.attention_w.size()) {
      f("attention.w", self.attention_w);
      f("attention.combine_w", self.attention_combine_w);
      f("attention.combine_b", self.attention_combine_b);
    }
    f("output.w", self.output_w);
    f("output.b", self.output_b);
  }
  template <class F, class G>
  static void visit_gru(F& f, const std::string& prefix, G& g) {
    f(prefix + ".w_input", g.w_input);
    f(prefix + ".w_hidden", g.w_hidden);
    f(prefix + ".b_input", g.b_input);
    f(prefix + ".b_hidden", g.b_hidden);
  }
};

class VocabMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// GRU encoder-decoder with optional multiplicative attention.
struct SeqModel {
  ModelConfig config;
  Params params;
  Vocabulary src_vocab, tgt_vocab;

  /// Throws VocabMismatch unless both vocabularies equal the model's.
  void require_vocab(const Vocabulary& src, const Vocabulary& tgt) const;
};

/// Parameters uniform in (-s, s) with s = 1/sqrt(hidden), deterministic
/// per seed. The config sizes are taken from the vocabularies.
SeqModel init_model(ModelConfig cfg, Vocabulary src, Vocabulary tgt);

/// Token ids without <s> or </s>.
struct SeqPair {
  std::vector<std::int32_t> src;
  std::vector<std::int32_t> tgt;
};

SeqPair encode_pair(const SeqModel& m, const Tokens& source, const Tokens& target);

struct ForwardCache;

struct ForwardResult {
  /// Mean cross-entropy over the supervised target positions (the target
  /// tokens followed by </s>); an empty target is not supervised.
  double loss = 0;
  std::size_t tokens = 0;
  std::shared_ptr<const ForwardCache> cache;
};

/// Teacher-forced forward pass. Throws std::invalid_argument for an empty
/// batch, an empty source or an out-of-range id.
ForwardResult forward_loss(const SeqModel& m, std::span<const SeqPair> batch);

/// Gradient of the forward pass's loss for every tensor.
Params backward(const SeqModel& m, const ForwardResult& f);

/// Log-probability of each target token and of the final </s> under
/// teacher forcing.
std::vector<double> token_log_probs(const SeqModel& m, const SeqPair& pair);

struct GradientCheck {
  double max_relative_error = 0;
  std::string worst_tensor;
  std::size_t entries = 0;
  /// Tensor name -> its largest relative error.
  std::vector<std::pair<std::string, double>> per_tensor;
};

/// Compares backward() against central differences on every parameter.
/// The relative error of an entry is |a - n| / max(|a|, |n|, 1e-6).
GradientCheck gradient_check(const SeqModel& m, std::span<const SeqPair> batch, double eps = 1e-5);

}  // namespace ctg
