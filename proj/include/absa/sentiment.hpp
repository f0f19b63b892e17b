// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "absa/annotation.hpp"
#include "absa/corpus.hpp"
#include "absa/features.hpp"
#include "absa/training.hpp"
#include "absa/window_classifier.hpp"

namespace absa {

struct ModelBundle;

struct SentimentPrediction {
  Sentiment label = Sentiment::Positive;
  std::array<double, kSentimentLabels> probabilities{};
};

/// Opinion-term sentiment classifier: a polarity window centered on the
/// opinion with distances to that opinion only, GRU final state, maxout
/// hidden layer, maxout output layer with softmax over the four labels.
class SentimentModel {
 public:
  SentimentModel(const HyperParams& hp, WordEmbeddings embeddings, std::uint64_t seed);

  const HyperParams& hyper() const { return hyper_; }
  const Vocabulary& vocab() const { return body_.vocab(); }
  std::size_t input_width() const { return body_.input_width(); }

  /// Window features for one opinion; other annotations in the review play
  /// no part.
  WindowFeatures features(const EncodedTokens& tokens, const Span& opinion) const;
  SentimentPrediction predict(const WindowFeatures& f) const;
  double loss(const WindowFeatures& f, Sentiment gold, bool backward);

  std::vector<Parameter*> parameters() { return body_.parameters(); }
  std::vector<const Parameter*> parameters() const;

  ModelBundle to_bundle() const;
  static SentimentModel from_bundle(const ModelBundle& bundle);

 private:
  HyperParams hyper_;
  detail::WindowClassifier body_;
};

/// Label with the highest probability; ties go to the earlier label in the
/// order positive, neutral, negative, unknown.
SentimentPrediction classify_opinion(const SentimentModel& model, const Review& review,
                                     const Span& opinion);

/// One-sample cross-entropy training over every (review, opinion) pair with
/// a gold label; throws DataError if an opinion lacks one.
Trained<SentimentModel> train_sentiment(const Corpus& corpus, const HyperParams& hp,
                                        const TrainOptions& options,
                                        std::optional<WordEmbeddings> embeddings = std::nullopt);

/// Labels for every opinion of every review.
std::vector<std::vector<Sentiment>> predict_sentiments(const SentimentModel& model,
                                                       const Corpus& corpus);

/// Always predicts positive.
std::vector<std::vector<Sentiment>> majority_baseline(const Corpus& corpus);

}  // namespace absa
