// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "absa/annotation.hpp"
#include "absa/corpus.hpp"
#include "absa/features.hpp"
#include "absa/iob2.hpp"
#include "absa/layers.hpp"
#include "absa/training.hpp"

namespace absa {

struct ModelBundle;

/// CNN:     embed -> 3 x (conv, relu, dropout) -> dense softmax
/// RNN:     embed -> GRU -> dense softmax
/// Stacked: embed -> 3 x (conv, relu, dropout) -> GRU -> dense softmax
/// Joint:   stacked body with an aspect head and an opinion head; the large
///          variant doubles the convolution maps and GRU units.
enum class TaggerKind { Cnn, Rnn, Stacked, JointSmall, JointLarge };

std::string_view to_string(TaggerKind kind);
/// Accepts cnn, rnn, stacked, joint, joint-small, joint-large.
std::optional<TaggerKind> parse_tagger_kind(std::string_view text);
bool is_joint(TaggerKind kind);

struct TaggerConfig {
  TaggerKind kind = TaggerKind::Stacked;
  bool use_pos = true;
  /// Target role of single-head kinds; joint kinds always predict both.
  Role role = Role::Aspect;
  HyperParams hyper;
  /// Weight of the opinion head's loss in joint models.
  double second_head_weight = 1.0;
};

/// Predicted tags for one role.
struct RoleTags {
  Role role;
  std::vector<iob2::Tag> tags;
};

class TaggerModel {
 public:
  static constexpr std::size_t kConvLayers = 3;

  /// Builds and initializes from `seed`. `embeddings` supplies the
  /// vocabulary and the initial word table.
  TaggerModel(TaggerConfig config, WordEmbeddings embeddings, std::uint64_t seed);

  const TaggerConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::vector<Role> head_roles() const;
  /// Input width, every hidden layer width, then the tag count, e.g.
  /// 146-50-50-50-100-3 for the stacked tagger with POS features.
  std::vector<std::size_t> layer_widths() const;

  /// Per-head tag probabilities (N x 3, columns I, O, B), inference mode.
  std::vector<Tensor2> probabilities(const EncodedTokens& tokens) const;

  /// Summed per-head cross-entropy against `gold` (one tag sequence per
  /// head). With `backward` set the gradients are accumulated into the
  /// parameters. Train mode needs `dropout_rng`.
  double loss(const EncodedTokens& tokens, const std::vector<std::vector<iob2::Tag>>& gold,
              Mode mode, Rng* dropout_rng, bool backward);

  /// Gold tag sequences for this model's heads.
  std::vector<std::vector<iob2::Tag>> gold_tags(const Review& review) const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  ModelBundle to_bundle() const;
  /// Throws DataError when the bundle is not a tagger or shapes disagree.
  static TaggerModel from_bundle(const ModelBundle& bundle);

 private:
  struct Trace;
  std::vector<Tensor2> forward_logits(const EncodedTokens& tokens, Mode mode, Rng* rng,
                                      Trace* trace) const;
  void backward(const Trace& trace, const std::vector<Tensor2>& logit_grads);
  bool has_convs() const;
  bool has_gru() const;

  TaggerConfig config_;
  Vocabulary vocab_;
  EmbeddingLayer words_;
  std::vector<Conv1D> convs_;
  Dropout dropout_;
  std::optional<Gru> gru_;
  std::vector<Dense> heads_;
};

/// Argmax per token with ties resolved O, then B, then I, followed by
/// iob2::repair. One entry per head. Empty input gives empty sequences.
std::vector<RoleTags> tag_sequence(const TaggerModel& model, const Review& review);

/// Tag index chosen from one probability row under the O > B > I tie rule.
iob2::Tag argmax_tag(std::span<const double> probs);

/// One review at a time, reviews reshuffled every epoch. Throws NumericError
/// naming the epoch and sample on a non-finite loss. When `embeddings` is
/// empty a random table over the corpus vocabulary is used.
Trained<TaggerModel> train_tagger(const Corpus& corpus, const TaggerConfig& config,
                                  const TrainOptions& options,
                                  std::optional<WordEmbeddings> embeddings = std::nullopt);

/// Predicted spans (all heads, roles set) for every review.
std::vector<std::vector<Span>> predict_corpus(const TaggerModel& model, const Corpus& corpus);

}  // namespace absa
