// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "absa/cross_validation.hpp"
#include "absa/errors.hpp"
#include "absa/metrics.hpp"
#include "absa/rng.hpp"
#include "test_util.hpp"

using namespace absa;

namespace {

std::vector<std::vector<Span>> spans(std::initializer_list<std::pair<std::size_t, std::size_t>> s) {
  std::vector<Span> out;
  for (auto [a, b] : s) out.push_back(Span{a, b});
  return {out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("corpus reading") {
  SUBCASE("empty") {
    std::istringstream in("");
    CHECK(read_corpus(in).empty());
  }
  SUBCASE("pos length mismatch names the line") {
    std::istringstream in(
        "{\"id\":\"a\",\"tokens\":[\"x\"],\"pos\":[\"NN\"]}\n"
        "{\"id\":\"b\",\"tokens\":[\"x\",\"y\"],\"pos\":[\"NN\"]}\n");
    try {
      read_corpus(in);
      FAIL("expected a data fault");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("missing pos falls back") {
    std::istringstream in("{\"id\":\"a\",\"tokens\":[\"good\",\"food\",\"!\"]}\n");
    const Corpus c = read_corpus(in);
    CHECK(c[0].pos == std::vector<std::string>{"NN", "NN", "."});
  }
  SUBCASE("bad spans and relations") {
    std::istringstream overlap(
        "{\"id\":\"a\",\"tokens\":[\"x\",\"y\"],\"aspects\":[{\"start\":0,\"end\":2},"
        "{\"start\":1,\"end\":2}]}\n");
    CHECK_THROWS_AS(read_corpus(overlap), DataError);
    std::istringstream dangling("{\"id\":\"a\",\"tokens\":[\"x\"],\"relations\":[[0,0]]}\n");
    CHECK_THROWS_AS(read_corpus(dangling), DataError);
    std::istringstream label(
        "{\"id\":\"a\",\"tokens\":[\"x\"],\"opinions\":[{\"start\":0,\"end\":1,"
        "\"sentiment\":\"meh\"}]}\n");
    CHECK_THROWS_AS(read_corpus(label), DataError);
    std::istringstream junk("not json\n");
    CHECK_THROWS_AS(read_corpus(junk), DataError);
  }
}

TEST_CASE("corpus round trip is byte-identical") {
  const auto dir = test::scratch_dir("corpus");
  const Corpus c = load_corpus(test::data_path("synthetic30.jsonl"));
  REQUIRE(c.size() == 30);
  save_corpus(dir / "a.jsonl", c);
  const Corpus again = load_corpus(dir / "a.jsonl");
  CHECK(again == c);
  save_corpus(dir / "b.jsonl", again);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
}

TEST_CASE("strict span scores") {
  const auto g = spans({{1, 3}});
  CHECK(strict_prf(g, g).f1 == 1.0);
  const auto off = strict_prf(g, spans({{1, 2}}));
  CHECK(off.tp == 0);
  CHECK(off.f1 == 0.0);

  const auto half = strict_prf(spans({{0, 1}, {2, 3}}), spans({{0, 1}}));
  CHECK(half.precision == 1.0);
  CHECK(half.recall == 0.5);
  CHECK(half.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  CHECK(strict_prf({{}}, {{}}).f1 == 1.0);
  CHECK(strict_prf(g, {{}}).f1 == 0.0);
  CHECK_THROWS_AS(strict_prf(g, {}), DataError);

  // role is part of the match
  std::vector<std::vector<Span>> wrong_role{{Span{1, 3, Role::Opinion, {}}}};
  CHECK(strict_prf(g, wrong_role).tp == 0);
}

TEST_CASE("property: strict scores are permutation invariant and bounded") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Span> gold, pred;
    for (auto* list : {&gold, &pred}) {
      const std::size_t n = rng.below(6);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t s = rng.below(10);
        list->push_back(Span{s, s + 1 + rng.below(3)});
      }
    }
    const Prf a = strict_prf({gold}, {pred});
    std::vector<Span> g2 = gold, p2 = pred;
    rng.shuffle(g2);
    rng.shuffle(p2);
    const Prf b = strict_prf({g2}, {p2});
    REQUIRE(a.f1 == b.f1);
    REQUIRE((a.f1 >= 0.0 && a.f1 <= 1.0));
    REQUIRE((a.f1 == 1.0) == (a.fp == 0 && a.fn == 0));
  }
}

TEST_CASE("sentiment accuracy") {
  using S = Sentiment;
  const std::vector<std::vector<S>> gold{{S::Positive, S::Negative}, {S::Neutral, S::Unknown}};
  CHECK(sentiment_accuracy(gold, gold).accuracy == 1.0);
  const auto half =
      sentiment_accuracy(gold, {{S::Positive, S::Positive}, {S::Neutral, S::Positive}});
  CHECK(half.accuracy == 0.5);
  CHECK(half.correct == 2);
  CHECK(half.incorrect == 2);
  CHECK_THROWS_AS(sentiment_accuracy(gold, {{S::Positive}, {S::Neutral}}), DataError);
}

TEST_CASE("relation scores") {
  const std::vector<std::vector<RelationKey>> gold{{{0, 1, 2, 3}, {4, 5, 6, 7}}};
  CHECK(relation_prf(gold, gold).f1 == 1.0);
  CHECK(relation_prf(gold, {{}}).f1 == 0.0);
  const auto half = relation_prf(gold, {{{0, 1, 2, 3}, {0, 1, 6, 7}}});
  CHECK(half.precision == 0.5);
  CHECK(half.recall == 0.5);
  CHECK(half.f1 == 0.5);

  const Review r = test::make_review("great screen", {{1, 2}},
                                     {test::opinion(0, 1, Sentiment::Positive)}, {{0, 0}});
  CHECK(relation_keys(r, r.relations) == std::vector<RelationKey>{{1, 2, 0, 1}});
}

TEST_CASE("k-fold plans") {
  const FoldPlan ten = kfold(10, 10, 1);
  for (std::size_t f = 0; f < 10; ++f) CHECK(ten.fold_size(f) == 1);

  const FoldPlan p = kfold(23, 10, 5);
  std::size_t twos = 0, threes = 0;
  for (std::size_t f = 0; f < 10; ++f) {
    twos += p.fold_size(f) == 2;
    threes += p.fold_size(f) == 3;
  }
  CHECK(twos == 7);
  CHECK(threes == 3);
  CHECK(kfold(23, 10, 5).assignment == p.assignment);
  CHECK(kfold(23, 10, 6).assignment != p.assignment);
  CHECK_THROWS_AS(kfold(3, 4, 1), DataError);
  CHECK_THROWS_AS(kfold(3, 0, 1), DataError);

  Corpus corpus;
  for (int i = 0; i < 23; ++i) {
    corpus.push_back(test::make_review("w" + std::to_string(i)));
    corpus.back().id = std::to_string(i);
  }
  std::vector<int> seen(23, 0);
  for (std::size_t f = 0; f < 10; ++f) {
    const auto [train, test_part] = fold_split(corpus, p, f);
    CHECK(train.size() + test_part.size() == 23);
    for (const Review& r : test_part) ++seen[std::stoi(r.id)];
  }
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("cross validation on the synthetic corpus") {
  const Corpus corpus = load_corpus(test::data_path("synthetic30.jsonl"));
  const Corpus copy = corpus;
  CvConfig cfg;
  cfg.k = 3;
  cfg.seed = 2;
  cfg.hyper = test::small_hyper();
  cfg.tagger_epochs = 2;
  cfg.sentiment_epochs = 2;
  cfg.relation_epochs = 2;
  const CvReport a = cross_validate(corpus, cfg);
  CHECK(corpus == copy);
  REQUIRE(a.folds.size() == 3);
  CHECK(a.sentiment.has_value());
  CHECK(a.relations.has_value());
  CHECK(a.filter_recall == 1.0);
  double mean = 0.0;
  for (const auto& f : a.folds) mean += f.aspects.f1;
  CHECK(a.aspects.f1 == doctest::Approx(mean / 3).epsilon(1e-12));

  const CvReport b = cross_validate(corpus, cfg);
  CHECK(a.aspects.f1 == b.aspects.f1);
  CHECK(a.opinions.f1 == b.opinions.f1);
  CHECK(a.sentiment->accuracy == b.sentiment->accuracy);
}
