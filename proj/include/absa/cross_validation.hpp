// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "absa/corpus.hpp"
#include "absa/features.hpp"
#include "absa/metrics.hpp"
#include "absa/rmsprop.hpp"
#include "absa/tagger.hpp"

namespace absa {

struct CvConfig {
  std::size_t k = 10;
  std::uint64_t seed = 1;
  TaggerKind tagger_kind = TaggerKind::Stacked;
  bool use_pos = true;
  HyperParams hyper;
  RmsPropConfig optimizer;
  std::size_t tagger_epochs = 15;
  std::size_t sentiment_epochs = 14;
  std::size_t relation_epochs = 28;
  double relation_threshold = 0.5;
  std::optional<WordEmbeddings> embeddings;
};

/// Scores of one fold. Sentiment and relation stages run on gold spans and
/// are absent when the fold's training data has no labeled opinions or no
/// candidate pairs.
struct FoldResult {
  Prf aspects;
  Prf opinions;
  std::optional<Accuracy> sentiment;
  std::optional<Accuracy> positive_only;
  std::optional<Prf> relations;
  std::size_t gold_relations = 0;
  std::size_t reachable_relations = 0;
};

struct MeanPrf {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct MeanAccuracy {
  double accuracy = 0.0, correct = 0.0, incorrect = 0.0;
};

/// Macro averages across folds.
struct CvReport {
  std::vector<FoldResult> folds;
  MeanPrf aspects;
  MeanPrf opinions;
  std::optional<MeanAccuracy> sentiment;
  std::optional<MeanAccuracy> positive_only;
  std::optional<MeanPrf> relations;
  /// Fraction of gold relations that pass the pair distance filter.
  double filter_recall = 1.0;
};

/// Separate aspect and opinion taggers (or one joint tagger), the sentiment
/// classifier and the relation classifier retrained on every fold. Folds
/// train concurrently with seeds derived from the master seed, so the report
/// does not depend on the thread count.
CvReport cross_validate(const Corpus& corpus, const CvConfig& config);

}  // namespace absa
