// SPDX-License-Identifier: Apache-2.0
#include "absa/model_gradcheck.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "absa/relation.hpp"
#include "absa/sentiment.hpp"
#include "absa/tagger.hpp"

namespace absa {

namespace {

constexpr std::array<std::string_view, 6> kKinds = {"cnn",   "rnn",       "stacked",
                                                    "joint", "sentiment", "relation"};

WordEmbeddings tiny_embeddings(const HyperParams& hp, Rng& rng) {
  WordEmbeddings e;
  for (const char* w : {"the", "battery", "life", "is", "great", "screen", "poor", "but"}) {
    e.vocab.add(w);
  }
  e.table = Tensor2(e.vocab.size(), hp.word_dim);
  for (double& v : e.table.data()) v = rng.uniform(-0.5, 0.5);
  return e;
}

Review random_review(std::size_t length, const Vocabulary& vocab, Rng& rng) {
  Review r;
  r.id = "gradcheck";
  const auto tags = pos_tag_set();
  for (std::size_t i = 0; i < length; ++i) {
    r.tokens.push_back(vocab.word(2 + rng.below(vocab.size() - 2)));
    r.pos.emplace_back(tags[rng.below(kPosPadding)]);
  }
  return r;
}

}  // namespace

std::span<const std::string_view> gradcheck_kinds() { return kKinds; }

HyperParams tiny_hyperparams() {
  HyperParams hp;
  hp.word_dim = 4;
  hp.dist_dim = 2;
  hp.conv_maps = 3;
  hp.gru_units = 3;
  hp.polarity_units = 3;
  hp.relation_units = 3;
  hp.polarity_window = 6;
  hp.relation_window = 6;
  hp.dropout = 0.5;
  return hp;
}

GradCheckReport check_model_gradients(std::string_view kind, std::uint64_t seed,
                                      double analytic_scale) {
  const HyperParams hp = tiny_hyperparams();
  Rng rng(derive_seed(seed, 77));
  WordEmbeddings emb = tiny_embeddings(hp, rng);

  if (auto tk = parse_tagger_kind(kind); tk && kind != "joint-large") {
    TaggerConfig config;
    config.kind = *tk;
    config.use_pos = true;
    config.hyper = hp;
    TaggerModel model(config, std::move(emb), seed);
    Review review = random_review(5, model.vocab(), rng);
    review.aspects = {{1, 3, Role::Aspect, std::nullopt}};
    review.opinions = {{4, 5, Role::Opinion, std::nullopt}};
    const EncodedTokens tokens = encode_tokens(review, model.vocab());
    const auto gold = model.gold_tags(review);
    LossClosure closure = [&](bool grads) {
      return model.loss(tokens, gold, Mode::Infer, nullptr, grads);
    };
    return gradient_check(closure, model.parameters(), 1e-5, analytic_scale);
  }
  if (kind == "sentiment") {
    SentimentModel model(hp, std::move(emb), seed);
    Review review = random_review(9, model.vocab(), rng);
    const Span opinion{3, 5, Role::Opinion, Sentiment::Negative};
    const WindowFeatures f = model.features(encode_tokens(review, model.vocab()), opinion);
    LossClosure closure = [&](bool grads) { return model.loss(f, Sentiment::Negative, grads); };
    return gradient_check(closure, model.parameters(), 1e-5, analytic_scale);
  }
  if (kind == "relation") {
    RelationModel model(hp, std::move(emb), seed);
    Review review = random_review(9, model.vocab(), rng);
    review.aspects = {{1, 2, Role::Aspect, std::nullopt}};
    review.opinions = {{4, 6, Role::Opinion, std::nullopt}};
    const auto pairs = generate_candidates(review.aspects, review.opinions, hp.max_pair_gap);
    const WindowFeatures f = model.features(encode_tokens(review, model.vocab()), pairs.at(0));
    LossClosure closure = [&](bool grads) { return model.loss(f, true, grads); };
    return gradient_check(closure, model.parameters(), 1e-5, analytic_scale);
  }
  throw std::invalid_argument("unknown model kind '" + std::string(kind) + "'");
}

}  // namespace absa
