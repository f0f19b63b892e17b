// SPDX-License-Identifier: Apache-2.0
#include "absa/window_classifier.hpp"

#include "absa/errors.hpp"

namespace absa::detail {

WindowClassifier::WindowClassifier(const HyperParams& hp, Vocabulary vocab, Tensor2 word_table,
                                   const std::vector<std::string>& distance_names,
                                   std::size_t hidden_units, std::size_t outputs, Rng& rng)
    : vocab_(std::move(vocab)),
      indexer_{hp.distance_clip},
      words_("word_embedding", word_table.rows(), word_table.cols()) {
  hp.validate();
  if (word_table.cols() != hp.word_dim || word_table.rows() != vocab_.size()) {
    throw ShapeError("window classifier: embedding table does not match vocabulary / word_dim");
  }
  words_.table.value = std::move(word_table);
  for (const auto& name : distance_names) {
    distances_.emplace_back(name, indexer_.table_size(), hp.dist_dim);
    init_uniform(distances_.back().table, 0.05, rng);
  }
  gru_ = Gru("gru", input_width(), hp.gru_units);
  gru_.init(rng);
  hidden_ = Maxout("hidden", hp.gru_units, hidden_units, hp.maxout_pieces);
  hidden_.init(rng);
  output_ = Maxout("output", hidden_units, outputs, hp.maxout_pieces);
  output_.init(rng);
}

std::size_t WindowClassifier::input_width() const {
  std::size_t w = words_.width() + kPosTagCount;
  for (const auto& d : distances_) w += d.width();
  return w;
}

std::vector<Parameter*> WindowClassifier::parameters() {
  std::vector<Parameter*> out = {&words_.table};
  for (auto& d : distances_) out.push_back(&d.table);
  for (Parameter* p : gru_.parameters()) out.push_back(p);
  for (Parameter* p : hidden_.parameters()) out.push_back(p);
  for (Parameter* p : output_.parameters()) out.push_back(p);
  return out;
}

Tensor2 WindowClassifier::logits(const WindowFeatures& f, Trace* trace) const {
  if (f.distances.size() != distances_.size()) {
    throw ShapeError("window classifier: expected " + std::to_string(distances_.size()) +
                     " distance sequences");
  }
  const Tensor2 word_rows = words_.forward(f.words);
  std::vector<Tensor2> dist_rows;
  for (std::size_t k = 0; k < distances_.size(); ++k) {
    dist_rows.push_back(distances_[k].forward(f.distances[k]));
  }
  const Tensor2 x = assemble_input(word_rows, f.pos, dist_rows);
  const Tensor2 states = gru_.forward(x, trace ? &trace->gru : nullptr);
  const Tensor2 last = states.row_tensor(states.rows() - 1);
  const Tensor2 h = hidden_.forward(last, trace ? &trace->hidden : nullptr);
  Tensor2 out = output_.forward(h, trace ? &trace->output : nullptr);
  if (trace) {
    trace->words = f.words;
    trace->distances = f.distances;
  }
  return out;
}

void WindowClassifier::backward(const Trace& t, const Tensor2& dlogits) {
  const Tensor2 dh = output_.backward(t.output, dlogits);
  const Tensor2 dlast = hidden_.backward(t.hidden, dh);
  Tensor2 dstates(t.gru.h.rows(), t.gru.h.cols());
  const std::size_t last = dstates.rows() - 1;
  for (std::size_t j = 0; j < dstates.cols(); ++j) dstates(last, j) = dlast(0, j);
  const Tensor2 dx = gru_.backward(t.gru, dstates);

  words_.backward(t.words, dx.slice_cols(0, words_.width()));
  std::size_t offset = words_.width() + kPosTagCount;
  for (std::size_t k = 0; k < distances_.size(); ++k) {
    distances_[k].backward(t.distances[k], dx.slice_cols(offset, distances_[k].width()));
    offset += distances_[k].width();
  }
}

}  // namespace absa::detail
