// SPDX-License-Identifier: Apache-2.0
#include "absa/relation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "absa/bundle.hpp"
#include "absa/errors.hpp"
#include "absa/layers.hpp"
#include "absa/loss.hpp"
#include "absa/rmsprop.hpp"

namespace absa {

std::size_t span_gap(const Span& a, const Span& b) {
  if (a.end <= b.start) return b.start - a.end;
  if (b.end <= a.start) return a.start - b.end;
  return 0;
}

std::vector<CandidatePair> generate_candidates(const std::vector<Span>& aspects,
                                               const std::vector<Span>& opinions,
                                               std::size_t max_gap) {
  std::vector<CandidatePair> out;
  for (std::size_t a = 0; a < aspects.size(); ++a) {
    for (std::size_t o = 0; o < opinions.size(); ++o) {
      const std::size_t gap = span_gap(aspects[a], opinions[o]);
      if (gap <= max_gap) out.push_back({a, o, aspects[a], opinions[o], gap});
    }
  }
  return out;
}

namespace {

detail::WindowClassifier make_body(const HyperParams& hp, WordEmbeddings emb,
                                   std::uint64_t seed) {
  Rng rng(derive_seed(seed, kInitStream));
  return detail::WindowClassifier(hp, std::move(emb.vocab), std::move(emb.table),
                                  {"aspect_distance", "opinion_distance"}, hp.relation_units, 1,
                                  rng);
}

}  // namespace

RelationModel::RelationModel(const HyperParams& hp, WordEmbeddings embeddings,
                             std::uint64_t seed, double threshold)
    : hyper_(hp), body_(make_body(hp, std::move(embeddings), seed)), threshold_(threshold) {}

std::vector<const Parameter*> RelationModel::parameters() const {
  auto mut = const_cast<RelationModel*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

WindowFeatures RelationModel::features(const EncodedTokens& tokens,
                                       const CandidatePair& pair) const {
  const Span focus[] = {pair.aspect, pair.opinion};
  return window_features(tokens, focus, hyper_.relation_window, body_.indexer(),
                         body_.vocab().pad_index());
}

double RelationModel::probability(const WindowFeatures& f) const {
  return sigmoid(body_.logits(f)(0, 0));
}

double RelationModel::loss(const WindowFeatures& f, bool related, bool do_backward) {
  detail::WindowClassifier::Trace trace;
  const Tensor2 logit = body_.logits(f, do_backward ? &trace : nullptr);
  const BinaryCrossEntropy bce = binary_cross_entropy(sigmoid(logit(0, 0)), related ? 1 : 0);
  if (do_backward) body_.backward(trace, Tensor2{{bce.logit_grad}});
  return bce.loss;
}

ModelBundle RelationModel::to_bundle() const {
  ModelBundle b;
  b.kind = "relation";
  b.hyper = hyper_;
  b.config["threshold"] = threshold_;
  b.vocabulary = vocab().words();
  store_parameters(b, parameters());
  return b;
}

RelationModel RelationModel::from_bundle(const ModelBundle& b) {
  if (b.kind != "relation") throw DataError("bundle kind '" + b.kind + "' is not relation");
  WordEmbeddings emb{Vocabulary::from_words(b.vocabulary), Tensor2()};
  emb.table = Tensor2(emb.vocab.size(), b.hyper.word_dim);
  double threshold = 0.5;
  if (auto it = b.config.find("threshold"); it != b.config.end()) threshold = it->get<double>();
  RelationModel model(b.hyper, std::move(emb), 0, threshold);
  restore_parameters(b, model.parameters());
  return model;
}

double classify_pair(const RelationModel& model, const Review& review, const CandidatePair& pair) {
  return model.probability(model.features(encode_tokens(review, model.vocab()), pair));
}

std::size_t count_unreachable_relations(const Corpus& corpus, std::size_t max_gap) {
  std::size_t n = 0;
  for (const Review& r : corpus) {
    for (const auto& [a, o] : r.relations) {
      if (span_gap(r.aspects[a], r.opinions[o]) > max_gap) ++n;
    }
  }
  return n;
}

std::vector<LabeledCandidate> labeled_candidates(const Review& review, std::size_t max_gap) {
  std::vector<LabeledCandidate> out;
  for (const CandidatePair& c : generate_candidates(review.aspects, review.opinions, max_gap)) {
    const RelationPair key{c.aspect_index, c.opinion_index};
    const bool related =
        std::find(review.relations.begin(), review.relations.end(), key) != review.relations.end();
    out.push_back({c, related});
  }
  return out;
}

Trained<RelationModel> train_relation(const Corpus& corpus, const HyperParams& hp,
                                      const TrainOptions& options,
                                      std::optional<WordEmbeddings> embeddings,
                                      double threshold) {
  options.optimizer.validate();
  if (!embeddings) {
    Rng emb_rng(derive_seed(options.seed, kInitStream + 100));
    embeddings = random_embeddings(corpus, hp.word_dim, emb_rng);
  }
  Trained<RelationModel> out{RelationModel(hp, std::move(*embeddings), options.seed, threshold),
                             {}};
  RelationModel& model = out.model;

  struct Sample {
    WindowFeatures features;
    bool related;
  };
  std::vector<Sample> samples;
  for (const Review& r : corpus) {
    const auto labeled = labeled_candidates(r, hp.max_pair_gap);
    if (labeled.empty()) continue;
    const EncodedTokens tokens = encode_tokens(r, model.vocab());
    for (const auto& [pair, related] : labeled) samples.push_back({model.features(tokens, pair), related});
  }
  if (samples.empty()) throw DataError("no aspect-opinion candidates to train the relation model on");

  Rng shuffle_rng(derive_seed(options.seed, kShuffleStream));
  std::vector<std::size_t> order(samples.size());
  auto params = model.parameters();
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    shuffle_rng.shuffle(order);
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Sample& s = samples[order[i]];
      const double l = model.loss(s.features, s.related, true);
      if (!std::isfinite(l)) {
        throw NumericError("non-finite relation loss at epoch " + std::to_string(epoch + 1) +
                           ", sample " + std::to_string(i));
      }
      rmsprop_step(params, options.optimizer);
      total += l;
    }
    const double mean = total / static_cast<double>(samples.size());
    out.epoch_loss.push_back(mean);
    if (options.on_epoch) options.on_epoch(epoch + 1, mean);
  }
  return out;
}

std::vector<std::vector<RelationPair>> extract_relations(const RelationModel& model,
                                                         const Corpus& corpus) {
  std::vector<std::vector<RelationPair>> out;
  for (const Review& r : corpus) {
    std::vector<RelationPair> found;
    const auto candidates = generate_candidates(r.aspects, r.opinions, model.hyper().max_pair_gap);
    if (!candidates.empty()) {
      const EncodedTokens tokens = encode_tokens(r, model.vocab());
      for (const CandidatePair& c : candidates) {
        if (model.probability(model.features(tokens, c)) > model.threshold()) {
          found.emplace_back(c.aspect_index, c.opinion_index);
        }
      }
    }
    out.push_back(std::move(found));
  }
  return out;
}

}  // namespace absa
