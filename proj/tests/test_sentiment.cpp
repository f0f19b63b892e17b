// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "absa/bundle.hpp"
#include "absa/errors.hpp"
#include "absa/model_gradcheck.hpp"
#include "absa/sentiment.hpp"
#include "test_util.hpp"

using namespace absa;
using test::opinion;

namespace {

Corpus four_labels() {
  return {
      test::make_review("the food is great", {{1, 2}}, {opinion(3, 4, Sentiment::Positive)}),
      test::make_review("the room was fine i guess", {{1, 2}}, {opinion(3, 4, Sentiment::Neutral)}),
      test::make_review("awful service all night", {{1, 2}}, {opinion(0, 1, Sentiment::Negative)}),
      test::make_review("the decor is unusual", {{1, 2}}, {opinion(3, 4, Sentiment::Unknown)}),
  };
}

void zero_output(SentimentModel& m) {
  for (Parameter* p : m.parameters()) {
    if (p->name.rfind("output.", 0) == 0) p->value.fill(0.0);
  }
}

}  // namespace

TEST_CASE("sentiment input width") {
  const Corpus corpus = four_labels();
  SentimentModel m(HyperParams{}, test::embeddings_for(corpus, 100), 1);
  CHECK(m.input_width() == 156);
}

TEST_CASE("stays-fresh distance row before padding") {
  // "hot" is a second opinion and must not affect the features
  const Review r = test::make_review("coffee stays fresh and hot in the carafe", {{7, 8}},
                                     {opinion(1, 3, Sentiment::Positive),
                                      opinion(4, 5, Sentiment::Positive)});
  SentimentModel m(HyperParams{}, test::embeddings_for({r}, 100), 1);
  const auto f = m.features(encode_tokens(r, m.vocab()), r.opinions[0]);
  REQUIRE(f.distances.size() == 1);
  REQUIRE(f.distances[0].size() == 20);
  CHECK(f.window.left_pad == 12);
  const DistanceIndexer idx;
  const long long expected[] = {-1, 0, 0, 1, 2, 3, 4, 5};
  for (std::size_t i = 0; i < 12; ++i) CHECK(f.distances[0][i] == idx.padding_index());
  for (std::size_t i = 0; i < 8; ++i) CHECK(f.distances[0][12 + i] == idx.index(expected[i]));
}

TEST_CASE("zeroed output layer gives uniform probabilities and the positive label") {
  const Corpus corpus = four_labels();
  SentimentModel m(test::small_hyper(), test::embeddings_for(corpus, 8), 1);
  zero_output(m);
  const auto p = classify_opinion(m, corpus[2], corpus[2].opinions[0]);
  for (double v : p.probabilities) CHECK(v == 0.25);
  CHECK(p.label == Sentiment::Positive);
}

TEST_CASE("probabilities sum to one") {
  const Corpus corpus = four_labels();
  SentimentModel m(test::small_hyper(), test::embeddings_for(corpus, 8), 7);
  for (const Review& r : corpus) {
    const auto p = classify_opinion(m, r, r.opinions[0]);
    CHECK(std::abs(std::accumulate(p.probabilities.begin(), p.probabilities.end(), 0.0) - 1.0) <
          1e-9);
  }
}

TEST_CASE("features ignore the other opinions in the sentence") {
  Review r = test::make_review("great food but awful slow service", {{1, 2}, {5, 6}},
                               {opinion(0, 1, Sentiment::Positive)});
  SentimentModel m(test::small_hyper(), test::embeddings_for({r}, 8), 1);
  const auto before = m.features(encode_tokens(r, m.vocab()), r.opinions[0]);
  const auto p_before = classify_opinion(m, r, r.opinions[0]);
  r.opinions.push_back(opinion(3, 5, Sentiment::Negative));
  const auto after = m.features(encode_tokens(r, m.vocab()), r.opinions[0]);
  CHECK(before.words == after.words);
  CHECK(before.pos == after.pos);
  CHECK(before.distances == after.distances);
  CHECK(classify_opinion(m, r, r.opinions[0]).probabilities == p_before.probabilities);
}

TEST_CASE("sentiment full-model gradient check") {
  CHECK(check_model_gradients("sentiment", 3).max_rel_error <= 1e-4);
}

TEST_CASE("sentiment training") {
  const Corpus corpus = four_labels();
  const auto emb = test::embeddings_for(corpus, 8);
  const HyperParams hp = test::small_hyper();
  TrainOptions opts;
  opts.seed = 4;

  SUBCASE("zero epochs") {
    opts.epochs = 0;
    const auto t = train_sentiment(corpus, hp, opts, emb);
    CHECK(t.model.to_bundle().arrays == SentimentModel(hp, emb, 4).to_bundle().arrays);
  }
  SUBCASE("reproducible") {
    opts.epochs = 3;
    CHECK(train_sentiment(corpus, hp, opts, emb).epoch_loss ==
          train_sentiment(corpus, hp, opts, emb).epoch_loss);
  }
  SUBCASE("single pair loss decreases") {
    opts.epochs = 50;
    const auto t = train_sentiment({corpus[1]}, hp, opts, emb);
    std::size_t upticks = 0;
    for (std::size_t e = 1; e < t.epoch_loss.size(); ++e) {
      if (t.epoch_loss[e] > t.epoch_loss[e - 1]) ++upticks;
    }
    CHECK(upticks <= 2);
    CHECK(t.epoch_loss.back() < t.epoch_loss.front());
  }
  SUBCASE("memorizes four labels") {
    opts.epochs = 150;
    opts.optimizer.learning_rate = 0.01;
    const auto t = train_sentiment(corpus, hp, opts, emb);
    const auto labels = predict_sentiments(t.model, corpus);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      REQUIRE(labels[i].size() == 1);
      CHECK(labels[i][0] == corpus[i].opinions[0].sentiment.value());
    }
  }
  SUBCASE("unlabeled opinion is a data fault") {
    Corpus bad = corpus;
    bad[0].opinions[0].sentiment.reset();
    opts.epochs = 1;
    CHECK_THROWS_AS(train_sentiment(bad, hp, opts, emb), DataError);
  }
}

TEST_CASE("positive-only baseline") {
  Corpus corpus = four_labels();
  for (const auto& labels : majority_baseline(corpus)) {
    REQUIRE(labels.size() == 1);
    CHECK(labels[0] == Sentiment::Positive);
  }
  CHECK(majority_baseline(Corpus{}).empty());
}
