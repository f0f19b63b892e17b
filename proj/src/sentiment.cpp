// SPDX-License-Identifier: Apache-2.0
#include "absa/sentiment.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "absa/bundle.hpp"
#include "absa/errors.hpp"
#include "absa/loss.hpp"
#include "absa/rmsprop.hpp"

namespace absa {

namespace {

detail::WindowClassifier make_body(const HyperParams& hp, WordEmbeddings emb,
                                   std::uint64_t seed) {
  Rng rng(derive_seed(seed, kInitStream));
  return detail::WindowClassifier(hp, std::move(emb.vocab), std::move(emb.table),
                                  {"opinion_distance"}, hp.polarity_units, kSentimentLabels,
                                  rng);
}

}  // namespace

SentimentModel::SentimentModel(const HyperParams& hp, WordEmbeddings embeddings,
                               std::uint64_t seed)
    : hyper_(hp), body_(make_body(hp, std::move(embeddings), seed)) {}

std::vector<const Parameter*> SentimentModel::parameters() const {
  auto mut = const_cast<SentimentModel*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

WindowFeatures SentimentModel::features(const EncodedTokens& tokens, const Span& opinion) const {
  const Span focus[] = {opinion};
  return window_features(tokens, focus, hyper_.polarity_window, body_.indexer(),
                         body_.vocab().pad_index());
}

SentimentPrediction SentimentModel::predict(const WindowFeatures& f) const {
  const Tensor2 p = softmax_rows(body_.logits(f));
  SentimentPrediction out;
  std::size_t best = 0;
  for (std::size_t k = 0; k < kSentimentLabels; ++k) {
    out.probabilities[k] = p(0, k);
    if (p(0, k) > p(0, best)) best = k;
  }
  out.label = kAllSentiments[best];
  return out;
}

double SentimentModel::loss(const WindowFeatures& f, Sentiment gold, bool do_backward) {
  detail::WindowClassifier::Trace trace;
  const Tensor2 logits = body_.logits(f, do_backward ? &trace : nullptr);
  const std::size_t target[] = {static_cast<std::size_t>(gold)};
  CrossEntropy ce = cross_entropy(softmax_rows(logits), target);
  if (do_backward) body_.backward(trace, ce.logit_grad);
  return ce.loss;
}

ModelBundle SentimentModel::to_bundle() const {
  ModelBundle b;
  b.kind = "sentiment";
  b.hyper = hyper_;
  b.vocabulary = vocab().words();
  store_parameters(b, parameters());
  return b;
}

SentimentModel SentimentModel::from_bundle(const ModelBundle& b) {
  if (b.kind != "sentiment") throw DataError("bundle kind '" + b.kind + "' is not sentiment");
  WordEmbeddings emb{Vocabulary::from_words(b.vocabulary), Tensor2()};
  emb.table = Tensor2(emb.vocab.size(), b.hyper.word_dim);
  SentimentModel model(b.hyper, std::move(emb), 0);
  restore_parameters(b, model.parameters());
  return model;
}

SentimentPrediction classify_opinion(const SentimentModel& model, const Review& review,
                                     const Span& opinion) {
  return model.predict(model.features(encode_tokens(review, model.vocab()), opinion));
}

Trained<SentimentModel> train_sentiment(const Corpus& corpus, const HyperParams& hp,
                                        const TrainOptions& options,
                                        std::optional<WordEmbeddings> embeddings) {
  options.optimizer.validate();
  if (!embeddings) {
    Rng emb_rng(derive_seed(options.seed, kInitStream + 100));
    embeddings = random_embeddings(corpus, hp.word_dim, emb_rng);
  }
  Trained<SentimentModel> out{SentimentModel(hp, std::move(*embeddings), options.seed), {}};
  SentimentModel& model = out.model;

  struct Sample {
    WindowFeatures features;
    Sentiment gold;
  };
  std::vector<Sample> samples;
  for (const Review& r : corpus) {
    const EncodedTokens tokens = encode_tokens(r, model.vocab());
    for (const Span& o : r.opinions) {
      if (!o.sentiment) {
        throw DataError("review '" + r.id + "': opinion [" + std::to_string(o.start) + "," +
                        std::to_string(o.end) + ") has no sentiment label");
      }
      samples.push_back({model.features(tokens, o), *o.sentiment});
    }
  }
  if (samples.empty()) throw DataError("no labeled opinions to train the sentiment model on");

  Rng shuffle_rng(derive_seed(options.seed, kShuffleStream));
  std::vector<std::size_t> order(samples.size());
  auto params = model.parameters();
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    shuffle_rng.shuffle(order);
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Sample& s = samples[order[i]];
      const double l = model.loss(s.features, s.gold, true);
      if (!std::isfinite(l)) {
        throw NumericError("non-finite sentiment loss at epoch " + std::to_string(epoch + 1) +
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

std::vector<std::vector<Sentiment>> predict_sentiments(const SentimentModel& model,
                                                       const Corpus& corpus) {
  std::vector<std::vector<Sentiment>> out;
  for (const Review& r : corpus) {
    std::vector<Sentiment> labels;
    if (!r.opinions.empty()) {
      const EncodedTokens tokens = encode_tokens(r, model.vocab());
      for (const Span& o : r.opinions) labels.push_back(model.predict(model.features(tokens, o)).label);
    }
    out.push_back(std::move(labels));
  }
  return out;
}

std::vector<std::vector<Sentiment>> majority_baseline(const Corpus& corpus) {
  std::vector<std::vector<Sentiment>> out;
  for (const Review& r : corpus) out.emplace_back(r.opinions.size(), Sentiment::Positive);
  return out;
}

}  // namespace absa
