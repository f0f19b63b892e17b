// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
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

struct CandidatePair {
  std::size_t aspect_index = 0;
  std::size_t opinion_index = 0;
  Span aspect;
  Span opinion;
  /// Tokens strictly between the nearer ends; 0 when adjacent or
  /// overlapping.
  std::size_t gap = 0;
};

std::size_t span_gap(const Span& a, const Span& b);

/// Every aspect x opinion pair of the review whose gap is <= max_gap.
std::vector<CandidatePair> generate_candidates(const std::vector<Span>& aspects,
                                               const std::vector<Span>& opinions,
                                               std::size_t max_gap = 20);

struct LabeledCandidate {
  CandidatePair pair;
  bool related = false;
};

/// Training pairs of one review: every filtered candidate over its gold
/// spans, positive iff listed in the gold relations.
std::vector<LabeledCandidate> labeled_candidates(const Review& review, std::size_t max_gap);

/// Aspect-opinion relation classifier: a window centered between the two
/// terms with a distance sequence to each, GRU final state, maxout hidden
/// layer and a single maxout output unit under a sigmoid.
class RelationModel {
 public:
  RelationModel(const HyperParams& hp, WordEmbeddings embeddings, std::uint64_t seed,
                double threshold = 0.5);

  const HyperParams& hyper() const { return hyper_; }
  const Vocabulary& vocab() const { return body_.vocab(); }
  std::size_t input_width() const { return body_.input_width(); }
  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }

  /// Window features: distance row 0 is to the aspect, row 1 to the opinion.
  WindowFeatures features(const EncodedTokens& tokens, const CandidatePair& pair) const;
  double probability(const WindowFeatures& f) const;
  double loss(const WindowFeatures& f, bool related, bool backward);

  std::vector<Parameter*> parameters() { return body_.parameters(); }
  std::vector<const Parameter*> parameters() const;

  ModelBundle to_bundle() const;
  static RelationModel from_bundle(const ModelBundle& bundle);

 private:
  HyperParams hyper_;
  detail::WindowClassifier body_;
  double threshold_;
};

double classify_pair(const RelationModel& model, const Review& review, const CandidatePair& pair);

/// Gold relations whose pair does not survive the distance filter.
std::size_t count_unreachable_relations(const Corpus& corpus, std::size_t max_gap);

/// Trains on labeled_candidates of every review.
Trained<RelationModel> train_relation(const Corpus& corpus, const HyperParams& hp,
                                      const TrainOptions& options,
                                      std::optional<WordEmbeddings> embeddings = std::nullopt,
                                      double threshold = 0.5);

/// Relations (aspect index, opinion index) predicted over each review's
/// current spans: candidates with probability above the model threshold.
std::vector<std::vector<RelationPair>> extract_relations(const RelationModel& model,
                                                         const Corpus& corpus);

}  // namespace absa
