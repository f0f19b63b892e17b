// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "absa/bundle.hpp"
#include "absa/errors.hpp"
#include "absa/relation.hpp"
#include "absa/sentiment.hpp"
#include "absa/tagger.hpp"
#include "test_util.hpp"

using namespace absa;

namespace {

std::string bytes_of(const ModelBundle& b) {
  std::ostringstream out;
  write_bundle(out, b);
  return out.str();
}

ModelBundle parse(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_bundle(in);
}

// Short training so the stored weights are not just the initialization.
TrainOptions brief() {
  TrainOptions o;
  o.epochs = 2;
  o.seed = 8;
  return o;
}

}  // namespace

TEST_CASE("tagger bundles round-trip exactly") {
  const Corpus corpus = load_corpus(test::data_path("synthetic30.jsonl"));
  for (TaggerKind kind : {TaggerKind::Cnn, TaggerKind::Rnn, TaggerKind::Stacked,
                          TaggerKind::JointSmall, TaggerKind::JointLarge}) {
    CAPTURE(to_string(kind));
    TaggerConfig c;
    c.kind = kind;
    c.hyper = test::small_hyper();
    c.role = Role::Opinion;
    c.use_pos = kind != TaggerKind::Rnn;
    const TaggerModel model = train_tagger(corpus, c, brief()).model;
    const std::string first = bytes_of(model.to_bundle());
    const TaggerModel loaded = TaggerModel::from_bundle(parse(first));
    CHECK(bytes_of(loaded.to_bundle()) == first);
    CHECK(loaded.config().role == Role::Opinion);
    CHECK(loaded.config().use_pos == c.use_pos);
    CHECK(predict_corpus(loaded, corpus) == predict_corpus(model, corpus));
    const auto tokens = encode_tokens(corpus[3], model.vocab());
    CHECK(loaded.probabilities(tokens) == model.probabilities(tokens));
  }
}

TEST_CASE("sentiment and relation bundles round-trip exactly") {
  const Corpus corpus = load_corpus(test::data_path("synthetic30.jsonl"));
  const HyperParams hp = test::small_hyper();

  const SentimentModel s = train_sentiment(corpus, hp, brief()).model;
  const std::string sb = bytes_of(s.to_bundle());
  const SentimentModel s2 = SentimentModel::from_bundle(parse(sb));
  CHECK(bytes_of(s2.to_bundle()) == sb);
  for (const Review& r : corpus) {
    for (const Span& o : r.opinions) {
      CHECK(classify_opinion(s2, r, o).probabilities == classify_opinion(s, r, o).probabilities);
    }
  }

  const RelationModel rel = train_relation(corpus, hp, brief(), std::nullopt, 0.375).model;
  const std::string rb = bytes_of(rel.to_bundle());
  const RelationModel rel2 = RelationModel::from_bundle(parse(rb));
  CHECK(bytes_of(rel2.to_bundle()) == rb);
  CHECK(rel2.threshold() == 0.375);
  CHECK(extract_relations(rel2, corpus) == extract_relations(rel, corpus));
}

TEST_CASE("bundle header contents") {
  const Corpus corpus{test::make_review("the sake menu")};
  TaggerConfig c;
  c.hyper = test::small_hyper();
  const ModelBundle b = TaggerModel(c, test::embeddings_for(corpus, 8), 1).to_bundle();
  CHECK(b.kind == "stacked");
  CHECK(b.format_version == 1);
  CHECK(b.vocabulary.size() == 5);
  CHECK(b.array("word_embedding").rows == 5);
  CHECK(b.hyper == c.hyper);
  CHECK_THROWS_AS(b.array("missing"), DataError);
  const auto round = parse(bytes_of(b));
  CHECK(round.arrays == b.arrays);
  CHECK(round.vocabulary == b.vocabulary);
}

TEST_CASE("malformed bundles are data faults") {
  const Corpus corpus{test::make_review("the sake menu")};
  TaggerConfig c;
  c.hyper = test::small_hyper();
  ModelBundle b = TaggerModel(c, test::embeddings_for(corpus, 8), 1).to_bundle();
  const std::string good = bytes_of(b);

  CHECK_THROWS_AS(parse("NOTABNDL" + good.substr(8)), DataError);
  CHECK_THROWS_AS(parse(good.substr(0, good.size() - 3)), DataError);
  CHECK_THROWS_AS(parse(good.substr(0, 12)), DataError);

  b.format_version = 99;
  CHECK_THROWS_AS(parse(bytes_of(b)), DataError);

  b.format_version = 1;
  b.kind = "sentiment";
  CHECK_THROWS_AS(SentimentModel::from_bundle(b), DataError);
  CHECK_THROWS_AS(RelationModel::from_bundle(b), DataError);
}
