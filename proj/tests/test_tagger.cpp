// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "absa/bundle.hpp"
#include "absa/errors.hpp"
#include "absa/model_gradcheck.hpp"
#include "absa/tagger.hpp"
#include "test_util.hpp"

using namespace absa;
using iob2::Tag;

namespace {

Corpus small_corpus() {
  return {
      test::make_review("the battery life is great", {{1, 3}}, {{4, 5}}, {{0, 0}}),
      test::make_review("a terrible screen overall", {{2, 3}}, {{1, 2}}, {{0, 0}}),
      test::make_review("i like the keyboard and the price", {{3, 4}, {6, 7}}, {{1, 2}},
                        {{0, 0}, {1, 0}}),
  };
}

TaggerConfig config_for(TaggerKind kind) {
  TaggerConfig c;
  c.kind = kind;
  c.hyper = test::small_hyper();
  return c;
}

void zero_heads(TaggerModel& m) {
  for (Parameter* p : m.parameters()) {
    if (p->name.rfind("head.", 0) == 0) p->value.fill(0.0);
  }
}

}  // namespace

TEST_CASE("argmax tie resolves O before B before I") {
  CHECK(argmax_tag(std::vector<double>{1, 1, 1}) == Tag::O);
  CHECK(argmax_tag(std::vector<double>{0.4, 0.2, 0.4}) == Tag::B);
  CHECK(argmax_tag(std::vector<double>{0.5, 0.1, 0.4}) == Tag::I);
}

TEST_CASE("zeroed head predicts all O with uniform probabilities") {
  const Corpus corpus = small_corpus();
  for (TaggerKind kind : {TaggerKind::Cnn, TaggerKind::Rnn, TaggerKind::Stacked,
                          TaggerKind::JointSmall, TaggerKind::JointLarge}) {
    TaggerModel m(config_for(kind), test::embeddings_for(corpus, 8), 1);
    zero_heads(m);
    const auto probs = m.probabilities(encode_tokens(corpus[0], m.vocab()));
    for (const Tensor2& p : probs) {
      for (double v : p.data()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
    for (const auto& rt : tag_sequence(m, corpus[0])) {
      CHECK(iob2::to_string(rt.tags) == "O O O O O");
    }
    const auto spans = predict_corpus(m, corpus);
    for (const auto& s : spans) CHECK(s.empty());
  }
}

TEST_CASE("single token and empty corpus") {
  const Corpus corpus = small_corpus();
  TaggerModel m(config_for(TaggerKind::Stacked), test::embeddings_for(corpus, 8), 1);
  const auto tags = tag_sequence(m, test::make_review("great"));
  REQUIRE(tags.size() == 1);
  CHECK(tags[0].tags.size() == 1);
  CHECK(predict_corpus(m, Corpus{}).empty());
}

TEST_CASE("tag probability rows sum to one and predicted spans are valid") {
  const Corpus corpus = small_corpus();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TaggerModel m(config_for(TaggerKind::JointSmall), test::embeddings_for(corpus, 8, seed), seed);
    // random heads with large weights push the model into arbitrary tag patterns
    Rng rng(seed);
    for (Parameter* p : m.parameters()) {
      if (p->name.rfind("head.", 0) == 0) init_uniform(*p, 20.0, rng);
    }
    for (const Review& r : corpus) {
      for (const Tensor2& p : m.probabilities(encode_tokens(r, m.vocab()))) {
        for (std::size_t n = 0; n < p.rows(); ++n) {
          const auto row = p.row(n);
          CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) < 1e-9);
        }
      }
    }
    const auto spans = predict_corpus(m, corpus);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      for (Role role : {Role::Aspect, Role::Opinion}) {
        std::vector<bool> used(corpus[i].tokens.size(), false);
        for (const Span& s : spans[i]) {
          if (s.role != role) continue;
          REQUIRE(s.start < s.end);
          REQUIRE(s.end <= corpus[i].tokens.size());
          for (std::size_t t = s.start; t < s.end; ++t) {
            REQUIRE_FALSE(used[t]);
            used[t] = true;
          }
        }
      }
    }
  }
}

TEST_CASE("layer widths") {
  const Corpus corpus = small_corpus();
  TaggerConfig c;
  c.kind = TaggerKind::Stacked;
  TaggerModel stacked(c, test::embeddings_for(corpus, 100), 1);
  CHECK(stacked.layer_widths() == std::vector<std::size_t>{146, 50, 50, 50, 100, 3});
  c.use_pos = false;
  TaggerModel no_pos(c, test::embeddings_for(corpus, 100), 1);
  CHECK(no_pos.layer_widths() == std::vector<std::size_t>{100, 50, 50, 50, 100, 3});
  c.kind = TaggerKind::JointLarge;
  c.use_pos = true;
  TaggerModel large(c, test::embeddings_for(corpus, 100), 1);
  CHECK(large.layer_widths() == std::vector<std::size_t>{146, 100, 100, 100, 200, 3});
  c.kind = TaggerKind::Cnn;
  CHECK(TaggerModel(c, test::embeddings_for(corpus, 100), 1).layer_widths() ==
        std::vector<std::size_t>{146, 50, 50, 50, 3});
  c.kind = TaggerKind::Rnn;
  CHECK(TaggerModel(c, test::embeddings_for(corpus, 100), 1).layer_widths() ==
        std::vector<std::size_t>{146, 100, 3});
}

TEST_CASE("joint gradients equal single-model gradients when the second head is off") {
  const Corpus corpus = small_corpus();
  const auto emb = test::embeddings_for(corpus, 8);
  TaggerConfig single = config_for(TaggerKind::Stacked);
  TaggerConfig joint = config_for(TaggerKind::JointSmall);
  joint.second_head_weight = 0.0;
  TaggerModel a(single, emb, 9);
  TaggerModel b(joint, emb, 9);
  const Review& r = corpus[2];
  Rng ra(4), rb(4);
  const double la = a.loss(encode_tokens(r, a.vocab()), a.gold_tags(r), Mode::Train, &ra, true);
  const double lb = b.loss(encode_tokens(r, b.vocab()), b.gold_tags(r), Mode::Train, &rb, true);
  CHECK(la == doctest::Approx(lb).epsilon(1e-12));

  const auto pa = a.parameters();
  const auto pb = b.parameters();
  std::size_t compared = 0;
  for (Parameter* p : pa) {
    for (Parameter* q : pb) {
      if (p->name != q->name) continue;
      ++compared;
      REQUIRE(p->value == q->value);
      const Tensor2& gp = p->grad_buffer();
      const Tensor2& gq = q->grad_buffer();
      for (std::size_t i = 0; i < gp.size(); ++i) {
        CHECK(std::abs(gp.data()[i] - gq.data()[i]) <= 1e-10);
      }
    }
  }
  CHECK(compared == pa.size());
  for (Parameter* q : pb) {
    if (q->name.rfind("head.opinion", 0) == 0) {
      for (double g : q->grad_buffer().data()) CHECK(g == 0.0);
    }
  }
}

TEST_CASE("full-model gradient checks on tiny taggers") {
  for (auto kind : {"cnn", "rnn", "stacked", "joint"}) {
    CAPTURE(kind);
    const auto report = check_model_gradients(kind, 3);
    CHECK(report.max_rel_error <= 1e-4);
    // every named group appears once
    for (std::size_t i = 0; i < report.groups.size(); ++i) {
      for (std::size_t j = i + 1; j < report.groups.size(); ++j) {
        CHECK(report.groups[i].name != report.groups[j].name);
      }
    }
  }
}

TEST_CASE("training with zero epochs returns the initialization") {
  const Corpus corpus = small_corpus();
  const auto emb = test::embeddings_for(corpus, 8);
  TrainOptions opts;
  opts.epochs = 0;
  opts.seed = 5;
  const auto trained = train_tagger(corpus, config_for(TaggerKind::Stacked), opts, emb);
  const TaggerModel fresh(config_for(TaggerKind::Stacked), emb, 5);
  CHECK(trained.epoch_loss.empty());
  CHECK(trained.model.to_bundle().arrays == fresh.to_bundle().arrays);
}

TEST_CASE("training is reproducible") {
  const Corpus corpus = small_corpus();
  TrainOptions opts;
  opts.epochs = 4;
  opts.seed = 11;
  const auto a = train_tagger(corpus, config_for(TaggerKind::Stacked), opts);
  const auto b = train_tagger(corpus, config_for(TaggerKind::Stacked), opts);
  CHECK(a.epoch_loss == b.epoch_loss);
  CHECK(a.model.to_bundle().arrays == b.model.to_bundle().arrays);
  opts.seed = 12;
  const auto c = train_tagger(corpus, config_for(TaggerKind::Stacked), opts);
  CHECK(a.epoch_loss != c.epoch_loss);
}

TEST_CASE("loss on a single review decreases steadily") {
  const Corpus one{small_corpus()[0]};
  TrainOptions opts;
  opts.epochs = 50;
  opts.seed = 2;
  // The RNN tagger has no dropout, so the per-epoch loss is not sampled noise.
  const auto t = train_tagger(one, config_for(TaggerKind::Rnn), opts);
  std::size_t upticks = 0;
  for (std::size_t e = 1; e < t.epoch_loss.size(); ++e) {
    if (t.epoch_loss[e] > t.epoch_loss[e - 1] * (1 + 1e-12)) ++upticks;
  }
  CHECK(upticks <= 2);  // 5% of 49 transitions
  CHECK(t.epoch_loss.back() < t.epoch_loss.front());
}

TEST_CASE("kind names") {
  CHECK(parse_tagger_kind("joint") == TaggerKind::JointSmall);
  CHECK(parse_tagger_kind("joint-large") == TaggerKind::JointLarge);
  CHECK_FALSE(parse_tagger_kind("lstm").has_value());
  CHECK_THROWS_AS(train_tagger(Corpus{}, TaggerConfig{}, TrainOptions{}), DataError);
}
