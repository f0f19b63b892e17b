// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "absa/annotation.hpp"
#include "absa/corpus.hpp"

namespace absa {

/// Micro-averaged counts and scores. Empty-denominator conventions: with no
/// gold and no predictions P = R = F1 = 1; otherwise an empty denominator
/// gives 0 for that score.
struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

Prf prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

/// Strict span matching: a prediction is correct iff start, end and role all
/// equal a gold span's. Lists are aligned per review; throws DataError on a
/// length mismatch.
Prf strict_prf(const std::vector<std::vector<Span>>& gold,
               const std::vector<std::vector<Span>>& predicted);

struct Accuracy {
  double accuracy = 0.0;  // 0 when there is nothing to score
  std::size_t correct = 0;
  std::size_t incorrect = 0;
};

/// Throws DataError when the per-review lists do not align.
Accuracy sentiment_accuracy(const std::vector<std::vector<Sentiment>>& gold,
                            const std::vector<std::vector<Sentiment>>& predicted);

/// A relation identified by the exact extents of its two spans.
struct RelationKey {
  std::size_t aspect_start, aspect_end, opinion_start, opinion_end;
  friend auto operator<=>(const RelationKey&, const RelationKey&) = default;
};

std::vector<RelationKey> relation_keys(const Review& review,
                                       const std::vector<RelationPair>& pairs);

/// Set-based P/R/F1 over relation keys, aligned per review.
Prf relation_prf(const std::vector<std::vector<RelationKey>>& gold,
                 const std::vector<std::vector<RelationKey>>& predicted);

/// Seeded shuffle followed by round-robin fold assignment.
struct FoldPlan {
  std::size_t k = 10;
  std::uint64_t seed = 1;
  std::vector<std::size_t> assignment;  // review index -> fold

  std::size_t fold_size(std::size_t fold) const;
};

/// Throws DataError if k is 0 or exceeds the corpus size.
FoldPlan kfold(std::size_t corpus_size, std::size_t k, std::uint64_t seed);

/// (train, test) for one fold.
std::pair<Corpus, Corpus> fold_split(const Corpus& corpus, const FoldPlan& plan, std::size_t fold);

}  // namespace absa
