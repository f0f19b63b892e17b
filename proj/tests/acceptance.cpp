// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criterion 8 runs only when ABSA_USAGE_CORPUS names a JSONL corpus.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "absa/bundle.hpp"
#include "absa/cli.hpp"
#include "absa/features.hpp"
#include "absa/iob2.hpp"
#include "absa/metrics.hpp"
#include "absa/model_gradcheck.hpp"
#include "absa/relation.hpp"
#include "absa/sentiment.hpp"
#include "absa/tagger.hpp"

namespace fs = std::filesystem;
using namespace absa;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const fs::path kCorpus = fs::path(ABSA_TEST_DATA) / "synthetic30.jsonl";

// 1 ---------------------------------------------------------------------
Outcome gradient_fidelity() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string worst_kind;
  for (auto kind : gradcheck_kinds()) {
    const double e = check_model_gradients(kind, 1).max_rel_error;
    if (e >= worst) {
      worst = e;
      worst_kind = kind;
    }
  }
  // the CLI verb must agree
  std::ostringstream out, err;
  const int code = cli::run({"gradcheck", "--kind", "all", "--seed", "1"}, out, err);
  const double secs = seconds_since(t0);
  const bool ok = worst <= 1e-4 && code == cli::kOk && secs < 60.0;
  return {ok ? Status::Pass : Status::Fail,
          "6 kinds, max rel err " + fmt("%.2e", worst) + " (" + worst_kind + "), exit " +
              std::to_string(code) + ", " + fmt("%.2f", secs) + " s"};
}

// 2 ---------------------------------------------------------------------
Outcome codec_soundness() {
  const auto t0 = Clock::now();
  Rng rng(20170101);
  std::size_t roundtrip_failures = 0, repair_failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = rng.below(40);
    std::vector<Span> spans;
    for (std::size_t i = rng.below(3); i < n; i += rng.below(4)) {
      const std::size_t len = 1 + rng.below(std::min<std::size_t>(5, n - i));
      spans.push_back(Span{i, i + len, Role::Opinion, {}});
      i += len;
    }
    if (iob2::decode(iob2::encode(spans, n), Role::Opinion) != spans) ++roundtrip_failures;
  }
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<iob2::Tag> tags(rng.below(40));
    for (auto& t : tags) t = static_cast<iob2::Tag>(rng.below(3));
    try {
      const auto fixed = iob2::repair(tags);
      if (iob2::repair(fixed) != fixed) ++repair_failures;
      iob2::decode(fixed);
    } catch (const std::exception&) {
      ++repair_failures;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = roundtrip_failures == 0 && repair_failures == 0 && secs < 10.0;
  return {ok ? Status::Pass : Status::Fail,
          "10000 span sets, " + std::to_string(roundtrip_failures) + " round-trip failures; 10000 " +
              "tag sequences, " + std::to_string(repair_failures) + " repair failures; " +
              fmt("%.2f", secs) + " s"};
}

// 3 ---------------------------------------------------------------------
Outcome worked_examples() {
  using V = std::vector<long long>;
  const std::vector<Span> sake{{1, 3}};
  const bool a = iob2::to_string(iob2::encode(sake, 8)) == "O B I O O O O O";
  const bool b = relative_distances(8, Span{1, 3}) == V{-1, 0, 0, 1, 2, 3, 4, 5};
  const bool c = relative_distances(7, Span{4, 6}) == V{-4, -3, -2, -1, 0, 0, 1};
  const bool d = relative_distances(7, Span{1, 2}) == V{-1, 0, 1, 2, 3, 4, 5};
  auto mark = [](bool x) { return x ? "ok" : "MISMATCH"; };
  return {a && b && c && d ? Status::Pass : Status::Fail,
          std::string("sake menu tags ") + mark(a) + ", stays-fresh row " + mark(b) +
              ", dual rows A " + mark(c) + " / O " + mark(d)};
}

// 4 ---------------------------------------------------------------------
Outcome overfit() {
  const auto t0 = Clock::now();
  const Corpus corpus = load_corpus(kCorpus);
  const HyperParams hp;  // full-size defaults
  TrainOptions opts;
  opts.seed = 1;
  opts.epochs = 100;

  std::vector<std::vector<Span>> gold_a, gold_o, pred_a, pred_o;
  for (const Review& r : corpus) {
    gold_a.push_back(r.aspects);
    gold_o.push_back(r.opinions);
  }
  bool battery_ok = false;
  for (Role role : {Role::Aspect, Role::Opinion}) {
    TaggerConfig cfg;
    cfg.kind = TaggerKind::Stacked;
    cfg.role = role;
    cfg.hyper = hp;
    const TaggerModel m = train_tagger(corpus, cfg, opts).model;
    (role == Role::Aspect ? pred_a : pred_o) = predict_corpus(m, corpus);
    if (role == Role::Aspect) {
      const auto tags = tag_sequence(m, corpus[0]);
      battery_ok = corpus[0].tokens.size() == 5 && iob2::to_string(tags[0].tags) == "O B I O O";
    }
  }
  // predicted opinions carry no label; compare extents only
  for (auto& v : pred_o) {
    for (Span& s : v) s.sentiment.reset();
  }
  for (auto& v : gold_o) {
    for (Span& s : v) s.sentiment.reset();
  }
  const double fa = strict_prf(gold_a, pred_a).f1;
  const double fo = strict_prf(gold_o, pred_o).f1;

  const SentimentModel sm = train_sentiment(corpus, hp, opts).model;
  std::vector<std::vector<Sentiment>> gold_s;
  for (const Review& r : corpus) {
    gold_s.emplace_back();
    for (const Span& o : r.opinions) gold_s.back().push_back(*o.sentiment);
  }
  const double acc = sentiment_accuracy(gold_s, predict_sentiments(sm, corpus)).accuracy;

  const RelationModel rm = train_relation(corpus, hp, opts).model;
  const auto found = extract_relations(rm, corpus);
  std::vector<std::vector<RelationKey>> gk, pk;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    gk.push_back(relation_keys(corpus[i], corpus[i].relations));
    pk.push_back(relation_keys(corpus[i], found[i]));
  }
  const double fr = relation_prf(gk, pk).f1;
  const double secs = seconds_since(t0);
  const bool ok = fa >= 0.95 && fo >= 0.95 && acc >= 0.95 && fr >= 0.95 && battery_ok &&
                  secs < 300.0;
  return {ok ? Status::Pass : Status::Fail,
          "100 epochs: aspect F1 " + fmt("%.3f", fa) + ", opinion F1 " + fmt("%.3f", fo) +
              ", sentiment acc " + fmt("%.3f", acc) + ", relation F1 " + fmt("%.3f", fr) +
              ", battery-life tags " + (battery_ok ? "O B I O O" : "WRONG") + ", " +
              fmt("%.1f", secs) + " s"};
}

// 5 ---------------------------------------------------------------------
Corpus labeled_corpus(std::size_t positives, std::size_t total, std::uint64_t seed) {
  std::vector<Sentiment> labels(total);
  Rng rng(seed);
  for (std::size_t i = 0; i < total; ++i) {
    labels[i] = i < positives ? Sentiment::Positive
                              : kAllSentiments[1 + rng.below(kSentimentLabels - 1)];
  }
  rng.shuffle(labels);
  Corpus corpus;
  for (std::size_t i = 0; i < total;) {
    Review r;
    r.id = std::to_string(i);
    const std::size_t k = std::min<std::size_t>(1 + rng.below(3), total - i);
    for (std::size_t j = 0; j < k; ++j, ++i) {
      r.tokens.push_back("w");
      r.opinions.push_back(Span{j, j + 1, Role::Opinion, labels[i]});
    }
    r.pos = fallback_pos_tags(r.tokens);
    corpus.push_back(std::move(r));
  }
  return corpus;
}

Outcome baseline_identity() {
  std::string detail;
  bool ok = true;
  const std::pair<std::size_t, std::size_t> cases[] = {{500, 1000}, {647, 1000}, {900, 1000}};
  std::uint64_t seed = 1;
  for (auto [pos, total] : cases) {
    const Corpus c = labeled_corpus(pos, total, seed++);
    std::vector<std::vector<Sentiment>> gold;
    std::size_t positives = 0, count = 0;
    for (const Review& r : c) {
      gold.emplace_back();
      for (const Span& o : r.opinions) {
        gold.back().push_back(*o.sentiment);
        positives += *o.sentiment == Sentiment::Positive;
        ++count;
      }
    }
    const double freq = static_cast<double>(positives) / static_cast<double>(count);
    const double acc = sentiment_accuracy(gold, majority_baseline(c)).accuracy;
    ok = ok && acc == freq && std::abs(acc - static_cast<double>(pos) / total) < 1e-15;
    detail += (detail.empty() ? "" : ", ") + fmt("%.3f", freq) + " -> " + fmt("%.17g", acc);
  }
  return {ok ? Status::Pass : Status::Fail, "frequency -> accuracy: " + detail};
}

// 6 ---------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every command goes through the CLI entry point, as a user would run it.
bool end_to_end(const fs::path& dir, std::string& error) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string corpus = kCorpus.string();
  auto p = [&](const char* n) { return (dir / n).string(); };
  const std::vector<std::vector<std::string>> steps = {
      {"train", "--stage", "terms", "--role", "aspect", "--epochs", "5", "--seed", "7", "--corpus",
       corpus, "--out", p("aspect.bin")},
      {"train", "--stage", "terms", "--role", "opinion", "--epochs", "5", "--seed", "7",
       "--corpus", corpus, "--out", p("opinion.bin")},
      {"train", "--stage", "sentiment", "--epochs", "5", "--seed", "7", "--corpus", corpus,
       "--out", p("sentiment.bin")},
      {"train", "--stage", "relations", "--epochs", "5", "--seed", "7", "--corpus", corpus,
       "--out", p("relation.bin")},
      {"pipeline", "--corpus", corpus, "--terms-model", p("aspect.bin"), "--terms-model",
       p("opinion.bin"), "--sentiment-model", p("sentiment.bin"), "--relation-model",
       p("relation.bin"), "--out", p("predictions.jsonl")},
  };
  for (const auto& args : steps) {
    std::ostringstream out, err;
    if (cli::run(args, out, err) != cli::kOk) {
      error = args[0] + ": " + err.str();
      return false;
    }
  }
  return true;
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "absa_acceptance_determinism";
  std::string error;
  if (!end_to_end(root / "a", error) || !end_to_end(root / "b", error)) {
    return {Status::Fail, "end-to-end run failed: " + error};
  }
  std::size_t identical = 0, files = 0;
  for (const char* f : {"aspect.bin", "opinion.bin", "sentiment.bin", "relation.bin",
                        "predictions.jsonl"}) {
    ++files;
    const std::string a = slurp(root / "a" / f);
    identical += !a.empty() && a == slurp(root / "b" / f);
  }
  fs::remove_all(root);
  return {identical == files ? Status::Pass : Status::Fail,
          std::to_string(identical) + "/" + std::to_string(files) +
              " artifacts byte-identical across two seeded runs (4 bundles + predictions)"};
}

// 7 ---------------------------------------------------------------------
std::size_t gru_params(std::size_t in, std::size_t h) { return 3 * (h * in + h * h + h); }

Outcome architecture() {
  const Corpus corpus = load_corpus(kCorpus);
  const HyperParams hp;
  Rng rng(1);
  const WordEmbeddings emb = random_embeddings(corpus, hp.word_dim, rng);
  const std::size_t v = emb.vocab.size();

  TaggerConfig cfg;
  cfg.kind = TaggerKind::Stacked;
  cfg.use_pos = true;
  const TaggerModel tagger(cfg, emb, 1);
  const auto widths = tagger.layer_widths();
  const bool widths_ok = widths == std::vector<std::size_t>{146, 50, 50, 50, 100, 3};
  const std::size_t tagger_expected = v * 100 + (50 * 3 * 146 + 50) + 2 * (50 * 3 * 50 + 50) +
                                      gru_params(50, 100) + (3 * 100 + 3);
  const std::size_t tagger_actual = tagger.to_bundle().parameter_count();

  const SentimentModel sent(hp, emb, 1);
  const std::size_t sent_expected = v * 100 + 42 * 10 + gru_params(156, 100) +
                                    2 * (100 * 100 + 100) + 2 * (4 * 100 + 4);
  const std::size_t sent_actual = sent.to_bundle().parameter_count();

  const RelationModel rel(hp, emb, 1);
  const std::size_t rel_expected = v * 100 + 2 * 42 * 10 + gru_params(166, 100) +
                                   2 * (100 * 100 + 100) + 2 * (1 * 100 + 1);
  const std::size_t rel_actual = rel.to_bundle().parameter_count();

  std::string w;
  for (std::size_t i = 0; i < widths.size(); ++i) w += (i ? "-" : "") + std::to_string(widths[i]);
  const bool ok = widths_ok && tagger_actual == tagger_expected && sent.input_width() == 156 &&
                  sent_actual == sent_expected && rel.input_width() == 166 &&
                  rel_actual == rel_expected;
  return {ok ? Status::Pass : Status::Fail,
          "stacked+POS " + w + " (" + std::to_string(tagger_actual) + "/" +
              std::to_string(tagger_expected) + " params), sentiment input " +
              std::to_string(sent.input_width()) + " (" + std::to_string(sent_actual) + "/" +
              std::to_string(sent_expected) + "), relation input " +
              std::to_string(rel.input_width()) + " (" + std::to_string(rel_actual) + "/" +
              std::to_string(rel_expected) + ")"};
}

// 8 ---------------------------------------------------------------------
Outcome dataset_mode() {
  const char* path = std::getenv("ABSA_USAGE_CORPUS");
  if (!path || !*path) return {Status::Skip, "set ABSA_USAGE_CORPUS to a converted USAGE corpus"};
  std::vector<std::string> args = {"evaluate", "--mode", "cv", "--corpus", path, "--k", "10"};
  if (const char* emb = std::getenv("ABSA_EMBEDDINGS"); emb && *emb) {
    args.insert(args.end(), {"--embeddings", emb});
  }
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  const int code = cli::run(args, out, err);
  std::cout << out.str();
  return {code == cli::kOk ? Status::Pass : Status::Fail,
          "10-fold cv exit " + std::to_string(code) + " in " + fmt("%.0f", seconds_since(t0)) +
              " s" + (code == cli::kOk ? "" : ": " + err.str())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"gradient fidelity", gradient_fidelity},
      {"codec soundness", codec_soundness},
      {"worked examples", worked_examples},
      {"overfit capability", overfit},
      {"baseline identity", baseline_identity},
      {"determinism", determinism},
      {"architecture conformance", architecture},
      {"dataset-present mode", dataset_mode},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
    failures += o.status == Status::Fail;
    std::cout << tag << "  " << index << ". " << c.name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
