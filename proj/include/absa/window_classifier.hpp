// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absa/features.hpp"
#include "absa/layers.hpp"

namespace absa::detail {

/// Body shared by the sentiment and relation classifiers: a window of word
/// embeddings, POS one-hots and one learned distance embedding per focus
/// span, read by a GRU whose final state passes through a maxout hidden
/// layer and a maxout output layer. Produces 1 x outputs logits.
class WindowClassifier {
 public:
  struct Trace {
    std::vector<std::size_t> words;
    std::vector<std::vector<std::size_t>> distances;
    Gru::Trace gru;
    Maxout::Trace hidden;
    Maxout::Trace output;
  };

  WindowClassifier(const HyperParams& hp, Vocabulary vocab, Tensor2 word_table,
                   const std::vector<std::string>& distance_names, std::size_t hidden_units,
                   std::size_t outputs, Rng& rng);

  Tensor2 logits(const WindowFeatures& f, Trace* trace = nullptr) const;
  void backward(const Trace& trace, const Tensor2& dlogits);

  std::size_t input_width() const;
  std::size_t hidden_units() const { return hidden_.output_width(); }
  std::vector<Parameter*> parameters();

  const Vocabulary& vocab() const { return vocab_; }
  const DistanceIndexer& indexer() const { return indexer_; }

 private:
  Vocabulary vocab_;
  DistanceIndexer indexer_;
  EmbeddingLayer words_;
  std::vector<EmbeddingLayer> distances_;
  Gru gru_;
  Maxout hidden_;
  Maxout output_;
};

}  // namespace absa::detail
