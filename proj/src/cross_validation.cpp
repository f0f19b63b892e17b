// SPDX-License-Identifier: Apache-2.0
#include "absa/cross_validation.hpp"

#include <exception>

#include "absa/relation.hpp"
#include "absa/sentiment.hpp"

namespace absa {

namespace {

std::vector<std::vector<Span>> gold_spans(const Corpus& corpus, Role role) {
  std::vector<std::vector<Span>> out;
  for (const Review& r : corpus) out.push_back(r.spans(role));
  return out;
}

std::vector<std::vector<Span>> only_role(const std::vector<std::vector<Span>>& spans, Role role) {
  std::vector<std::vector<Span>> out;
  for (const auto& list : spans) {
    std::vector<Span> kept;
    for (const Span& s : list) {
      if (s.role == role) kept.push_back(s);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

bool has_labeled_opinions(const Corpus& corpus) {
  for (const Review& r : corpus) {
    for (const Span& o : r.opinions) {
      if (!o.sentiment) return false;
    }
  }
  for (const Review& r : corpus) {
    if (!r.opinions.empty()) return true;
  }
  return false;
}

bool has_candidates(const Corpus& corpus, std::size_t max_gap) {
  for (const Review& r : corpus) {
    if (!generate_candidates(r.aspects, r.opinions, max_gap).empty()) return true;
  }
  return false;
}

FoldResult run_fold(const Corpus& train, const Corpus& test, const CvConfig& cfg,
                    std::uint64_t seed) {
  FoldResult res;
  TrainOptions opts;
  opts.optimizer = cfg.optimizer;

  TaggerConfig tc;
  tc.kind = cfg.tagger_kind;
  tc.use_pos = cfg.use_pos;
  tc.hyper = cfg.hyper;
  opts.epochs = cfg.tagger_epochs;
  std::vector<std::vector<Span>> predicted(test.size());
  std::vector<Role> roles = is_joint(tc.kind) ? std::vector<Role>{Role::Aspect}
                                              : std::vector<Role>{Role::Aspect, Role::Opinion};
  for (Role role : roles) {
    tc.role = role;
    opts.seed = derive_seed(seed, role == Role::Aspect ? 10 : 11);
    const auto tagger = train_tagger(train, tc, opts, cfg.embeddings);
    const auto spans = predict_corpus(tagger.model, test);
    for (std::size_t i = 0; i < test.size(); ++i) {
      predicted[i].insert(predicted[i].end(), spans[i].begin(), spans[i].end());
    }
  }
  res.aspects = strict_prf(gold_spans(test, Role::Aspect), only_role(predicted, Role::Aspect));
  res.opinions = strict_prf(gold_spans(test, Role::Opinion), only_role(predicted, Role::Opinion));

  if (has_labeled_opinions(train) && has_labeled_opinions(test)) {
    opts.epochs = cfg.sentiment_epochs;
    opts.seed = derive_seed(seed, 12);
    const auto model = train_sentiment(train, cfg.hyper, opts, cfg.embeddings);
    std::vector<std::vector<Sentiment>> gold;
    for (const Review& r : test) {
      std::vector<Sentiment> labels;
      for (const Span& o : r.opinions) labels.push_back(*o.sentiment);
      gold.push_back(std::move(labels));
    }
    res.sentiment = sentiment_accuracy(gold, predict_sentiments(model.model, test));
    res.positive_only = sentiment_accuracy(gold, majority_baseline(test));
  }

  for (const Review& r : test) res.gold_relations += r.relations.size();
  res.reachable_relations =
      res.gold_relations - count_unreachable_relations(test, cfg.hyper.max_pair_gap);
  if (has_candidates(train, cfg.hyper.max_pair_gap)) {
    opts.epochs = cfg.relation_epochs;
    opts.seed = derive_seed(seed, 13);
    const auto model =
        train_relation(train, cfg.hyper, opts, cfg.embeddings, cfg.relation_threshold);
    const auto pairs = extract_relations(model.model, test);
    std::vector<std::vector<RelationKey>> gold, pred;
    for (std::size_t i = 0; i < test.size(); ++i) {
      gold.push_back(relation_keys(test[i], test[i].relations));
      pred.push_back(relation_keys(test[i], pairs[i]));
    }
    res.relations = relation_prf(gold, pred);
  }
  return res;
}

void add(MeanPrf& m, const Prf& p) {
  m.precision += p.precision;
  m.recall += p.recall;
  m.f1 += p.f1;
}

void add(MeanAccuracy& m, const Accuracy& a) {
  m.accuracy += a.accuracy;
  m.correct += static_cast<double>(a.correct);
  m.incorrect += static_cast<double>(a.incorrect);
}

void scale(MeanPrf& m, double n) {
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
}

void scale(MeanAccuracy& m, double n) {
  m.accuracy /= n;
  m.correct /= n;
  m.incorrect /= n;
}

}  // namespace

CvReport cross_validate(const Corpus& corpus, const CvConfig& config) {
  const FoldPlan plan = kfold(corpus.size(), config.k, config.seed);
  CvReport report;
  report.folds.resize(config.k);
  std::vector<std::exception_ptr> errors(config.k);

  const auto k = static_cast<std::ptrdiff_t>(config.k);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t f = 0; f < k; ++f) {
    try {
      const auto fold = static_cast<std::size_t>(f);
      auto [train, test] = fold_split(corpus, plan, fold);
      report.folds[fold] = run_fold(train, test, config, derive_seed(config.seed, 1000 + fold));
    } catch (...) {
      errors[static_cast<std::size_t>(f)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t sentiment_folds = 0, relation_folds = 0, gold = 0, reachable = 0;
  MeanAccuracy sent, base;
  MeanPrf rel;
  for (const FoldResult& r : report.folds) {
    add(report.aspects, r.aspects);
    add(report.opinions, r.opinions);
    if (r.sentiment) {
      add(sent, *r.sentiment);
      add(base, *r.positive_only);
      ++sentiment_folds;
    }
    if (r.relations) {
      add(rel, *r.relations);
      ++relation_folds;
    }
    gold += r.gold_relations;
    reachable += r.reachable_relations;
  }
  const auto n = static_cast<double>(config.k);
  scale(report.aspects, n);
  scale(report.opinions, n);
  if (sentiment_folds) {
    scale(sent, static_cast<double>(sentiment_folds));
    scale(base, static_cast<double>(sentiment_folds));
    report.sentiment = sent;
    report.positive_only = base;
  }
  if (relation_folds) {
    scale(rel, static_cast<double>(relation_folds));
    report.relations = rel;
  }
  if (gold) report.filter_recall = static_cast<double>(reachable) / static_cast<double>(gold);
  return report;
}

}  // namespace absa
