// SPDX-License-Identifier: Apache-2.0
#include "absa/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "absa/errors.hpp"
#include "absa/rng.hpp"

namespace absa {

Prf prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf out{0.0, 0.0, 0.0, tp, fp, fn};
  if (tp + fp + fn == 0) {
    out.precision = out.recall = out.f1 = 1.0;
    return out;
  }
  if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

namespace {

template <typename T, typename Key>
void count_matches(const std::vector<T>& gold, const std::vector<T>& pred, Key key,
                   std::size_t& tp, std::size_t& fp, std::size_t& fn) {
  using K = decltype(key(gold.front()));
  std::multiset<K> remaining;
  for (const T& g : gold) remaining.insert(key(g));
  for (const T& p : pred) {
    auto it = remaining.find(key(p));
    if (it != remaining.end()) {
      ++tp;
      remaining.erase(it);
    } else {
      ++fp;
    }
  }
  fn += remaining.size();
}

void check_aligned(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DataError(std::string(what) + ": gold has " + std::to_string(a) +
                    " reviews, predictions have " + std::to_string(b));
  }
}

}  // namespace

Prf strict_prf(const std::vector<std::vector<Span>>& gold,
               const std::vector<std::vector<Span>>& predicted) {
  check_aligned(gold.size(), predicted.size(), "strict_prf");
  std::size_t tp = 0, fp = 0, fn = 0;
  auto key = [](const Span& s) { return std::make_tuple(s.start, s.end, s.role); };
  for (std::size_t i = 0; i < gold.size(); ++i) count_matches(gold[i], predicted[i], key, tp, fp, fn);
  return prf_from_counts(tp, fp, fn);
}

Accuracy sentiment_accuracy(const std::vector<std::vector<Sentiment>>& gold,
                            const std::vector<std::vector<Sentiment>>& predicted) {
  check_aligned(gold.size(), predicted.size(), "sentiment_accuracy");
  Accuracy out;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != predicted[i].size()) {
      throw DataError("sentiment_accuracy: review " + std::to_string(i) + " has " +
                      std::to_string(gold[i].size()) + " gold labels but " +
                      std::to_string(predicted[i].size()) + " predictions");
    }
    for (std::size_t j = 0; j < gold[i].size(); ++j) {
      if (gold[i][j] == predicted[i][j]) ++out.correct;
      else ++out.incorrect;
    }
  }
  const std::size_t total = out.correct + out.incorrect;
  if (total) out.accuracy = static_cast<double>(out.correct) / static_cast<double>(total);
  return out;
}

std::vector<RelationKey> relation_keys(const Review& review,
                                       const std::vector<RelationPair>& pairs) {
  std::vector<RelationKey> out;
  for (const auto& [a, o] : pairs) {
    const Span& as = review.aspects.at(a);
    const Span& os = review.opinions.at(o);
    out.push_back({as.start, as.end, os.start, os.end});
  }
  return out;
}

Prf relation_prf(const std::vector<std::vector<RelationKey>>& gold,
                 const std::vector<std::vector<RelationKey>>& predicted) {
  check_aligned(gold.size(), predicted.size(), "relation_prf");
  std::size_t tp = 0, fp = 0, fn = 0;
  auto key = [](const RelationKey& k) { return k; };
  for (std::size_t i = 0; i < gold.size(); ++i) {
    // set semantics: duplicates collapse
    std::vector<RelationKey> g = gold[i], p = predicted[i];
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    count_matches(g, p, key, tp, fp, fn);
  }
  return prf_from_counts(tp, fp, fn);
}

std::size_t FoldPlan::fold_size(std::size_t fold) const {
  return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), fold));
}

FoldPlan kfold(std::size_t corpus_size, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > corpus_size) {
    throw DataError("cannot split " + std::to_string(corpus_size) + " reviews into " +
                    std::to_string(k) + " folds");
  }
  std::vector<std::size_t> order(corpus_size);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  FoldPlan plan{k, seed, std::vector<std::size_t>(corpus_size)};
  for (std::size_t i = 0; i < order.size(); ++i) plan.assignment[order[i]] = i % k;
  return plan;
}

std::pair<Corpus, Corpus> fold_split(const Corpus& corpus, const FoldPlan& plan, std::size_t fold) {
  if (plan.assignment.size() != corpus.size()) throw DataError("fold plan does not match corpus");
  std::pair<Corpus, Corpus> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (plan.assignment[i] == fold ? out.second : out.first).push_back(corpus[i]);
  }
  return out;
}

}  // namespace absa
