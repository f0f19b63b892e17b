// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "absa/bundle.hpp"
#include "absa/cli.hpp"
#include "absa/corpus.hpp"
#include "absa/cross_validation.hpp"
#include "absa/errors.hpp"
#include "absa/metrics.hpp"
#include "absa/model_gradcheck.hpp"
#include "absa/relation.hpp"
#include "absa/sentiment.hpp"
#include "absa/tagger.hpp"

namespace absa::cli {

namespace {

using nlohmann::ordered_json;

/// Bad flag values discovered after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kGradCheckTolerance = 1e-4;

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

// ----------------------------------------------------------------- options

struct CommonOptions {
  std::uint64_t seed = 1;
  bool json = false;
};

struct ModelOptions {
  std::string embeddings;
  std::size_t trim = 200000;
  std::size_t word_dim = 100;
  double lr = 0.001;
  double rho = 0.9;
  double eps = 1e-6;
  std::string kind = "stacked";
  std::string role = "aspect";
  bool use_pos = true;
  double threshold = 0.5;
};

struct TrainArgs {
  std::string stage;
  std::string corpus;
  std::string out;
  int epochs = -1;
};

struct PredictArgs {
  std::string stage;
  std::string model;
  std::string corpus;
  std::string out;
};

struct PipelineArgs {
  std::string corpus;
  std::vector<std::string> terms_models;
  std::string sentiment_model;
  std::string relation_model;
  std::string out;
};

struct EvaluateArgs {
  std::string mode;
  std::string corpus;
  std::string predictions;
  std::size_t k = 10;
  int epochs = -1;
  std::size_t tagger_epochs = 15;
  std::size_t sentiment_epochs = 14;
  std::size_t relation_epochs = 28;
};

struct GradcheckArgs {
  std::string kind = "all";
  bool plant_bug = false;
};

struct InspectArgs {
  std::string model;
};

void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--embeddings", m.embeddings, "word2vec text file with pretrained vectors");
  app->add_option("--trim", m.trim, "keep this many most frequent embedding words");
  app->add_option("--word-dim", m.word_dim, "word vector width");
  app->add_option("--kind", m.kind, "tagger kind: cnn, rnn, stacked, joint, joint-large");
  app->add_option("--role", m.role, "role of a single-head tagger: aspect or opinion");
  app->add_flag("--use-pos,!--no-pos", m.use_pos, "append POS one-hot features to tagger input");
  app->add_option("--threshold", m.threshold, "relation decision threshold");
  app->add_option("--lr", m.lr, "RMSProp learning rate");
  app->add_option("--rho", m.rho, "RMSProp decay");
  app->add_option("--eps", m.eps, "RMSProp epsilon");
}

HyperParams hyper_from(const ModelOptions& m) {
  HyperParams hp;
  hp.word_dim = m.word_dim;
  hp.validate();
  return hp;
}

RmsPropConfig optimizer_from(const ModelOptions& m) {
  RmsPropConfig c{m.lr, m.rho, m.eps};
  c.validate();
  return c;
}

Role parse_role(const std::string& text) {
  if (text == "aspect") return Role::Aspect;
  if (text == "opinion") return Role::Opinion;
  throw UsageError("--role must be aspect or opinion, got '" + text + "'");
}

TaggerKind parse_kind(const std::string& text) {
  auto k = parse_tagger_kind(text);
  if (!k) throw UsageError("unknown tagger kind '" + text + "'");
  return *k;
}

std::optional<WordEmbeddings> embeddings_from(const ModelOptions& m, std::ostream& err) {
  if (m.embeddings.empty()) {
    err << "warning: no --embeddings given; word vectors are randomly initialized\n";
    return std::nullopt;
  }
  return load_embeddings(m.embeddings, m.trim, m.word_dim);
}

// ----------------------------------------------------------------- train

int cmd_train(const TrainArgs& a, const ModelOptions& m, const CommonOptions& c,
              std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(a.corpus);
  const HyperParams hp = hyper_from(m);
  TrainOptions opts;
  opts.seed = c.seed;
  opts.optimizer = optimizer_from(m);
  ordered_json report;
  report["stage"] = a.stage;
  report["epochs"] = ordered_json::array();
  opts.on_epoch = [&](std::size_t epoch, double loss) {
    if (c.json) {
      report["epochs"].push_back({{"epoch", epoch}, {"mean_loss", loss}});
    } else {
      out << "epoch " << epoch << " mean_loss " << num(loss, 6) << '\n';
    }
  };

  ModelBundle bundle;
  if (a.stage == "terms") {
    TaggerConfig tc;
    tc.kind = parse_kind(m.kind);
    tc.role = parse_role(m.role);
    tc.use_pos = m.use_pos;
    tc.hyper = hp;
    opts.epochs = a.epochs >= 0 ? static_cast<std::size_t>(a.epochs) : 15;
    bundle = train_tagger(corpus, tc, opts, embeddings_from(m, err)).model.to_bundle();
  } else if (a.stage == "sentiment") {
    opts.epochs = a.epochs >= 0 ? static_cast<std::size_t>(a.epochs) : 14;
    bundle = train_sentiment(corpus, hp, opts, embeddings_from(m, err)).model.to_bundle();
  } else if (a.stage == "relations") {
    opts.epochs = a.epochs >= 0 ? static_cast<std::size_t>(a.epochs) : 28;
    const std::size_t unreachable = count_unreachable_relations(corpus, hp.max_pair_gap);
    std::size_t total = 0;
    for (const Review& r : corpus) total += r.relations.size();
    report["gold_relations"] = total;
    report["unreachable_relations"] = unreachable;
    if (!c.json && unreachable) {
      err << "note: " << unreachable << " of " << total
          << " gold relations exceed the pair distance limit and cannot be learned\n";
    }
    bundle = train_relation(corpus, hp, opts, embeddings_from(m, err), m.threshold)
                 .model.to_bundle();
  } else {
    throw UsageError("--stage must be terms, sentiment or relations");
  }
  save_bundle(a.out, bundle);
  report["model"] = a.out;
  if (c.json) out << report.dump(2) << '\n';
  else out << "wrote " << a.out << '\n';
  return kOk;
}

// ----------------------------------------------------------------- predict

void replace_spans(Review& r, const std::vector<Span>& spans, const std::vector<Role>& roles) {
  for (Role role : roles) {
    (role == Role::Aspect ? r.aspects : r.opinions).clear();
  }
  for (const Span& s : spans) (s.role == Role::Aspect ? r.aspects : r.opinions).push_back(s);
  r.relations.clear();
}

void apply_sentiments(Corpus& corpus, const SentimentModel& model) {
  const auto labels = predict_sentiments(model, corpus);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = 0; j < corpus[i].opinions.size(); ++j) {
      corpus[i].opinions[j].sentiment = labels[i][j];
    }
  }
}

void apply_relations(Corpus& corpus, const RelationModel& model) {
  const auto pairs = extract_relations(model, corpus);
  for (std::size_t i = 0; i < corpus.size(); ++i) corpus[i].relations = pairs[i];
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  Corpus corpus = load_corpus(a.corpus);
  const ModelBundle bundle = load_bundle(a.model);
  if (a.stage == "terms") {
    const TaggerModel model = TaggerModel::from_bundle(bundle);
    const auto spans = predict_corpus(model, corpus);
    for (std::size_t i = 0; i < corpus.size(); ++i) replace_spans(corpus[i], spans[i], model.head_roles());
  } else if (a.stage == "sentiment") {
    apply_sentiments(corpus, SentimentModel::from_bundle(bundle));
  } else if (a.stage == "relations") {
    apply_relations(corpus, RelationModel::from_bundle(bundle));
  } else {
    throw UsageError("--stage must be terms, sentiment or relations");
  }
  save_corpus(a.out, corpus);
  out << "wrote " << corpus.size() << " reviews to " << a.out << '\n';
  return kOk;
}

// ----------------------------------------------------------------- pipeline

int cmd_pipeline(const PipelineArgs& a, std::ostream& out) {
  const Corpus input = load_corpus(a.corpus);
  std::vector<TaggerModel> taggers;
  for (const auto& path : a.terms_models) taggers.push_back(TaggerModel::from_bundle(load_bundle(path)));
  bool aspects = false, opinions = false;
  for (const TaggerModel& t : taggers) {
    for (Role r : t.head_roles()) (r == Role::Aspect ? aspects : opinions) = true;
  }
  if (!aspects || !opinions) {
    throw UsageError("--terms-model must cover both roles: one joint tagger, or an aspect and an "
                     "opinion tagger");
  }
  const SentimentModel sentiment = SentimentModel::from_bundle(load_bundle(a.sentiment_model));
  const RelationModel relation = RelationModel::from_bundle(load_bundle(a.relation_model));

  // stage 1: terms
  Corpus annotated = input;
  for (Review& r : annotated) {
    r.aspects.clear();
    r.opinions.clear();
    r.relations.clear();
  }
  for (const TaggerModel& t : taggers) {
    const auto spans = predict_corpus(t, input);
    for (std::size_t i = 0; i < annotated.size(); ++i) {
      for (const Span& s : spans[i]) {
        (s.role == Role::Aspect ? annotated[i].aspects : annotated[i].opinions).push_back(s);
      }
    }
  }
  for (Review& r : annotated) {
    auto by_start = [](const Span& x, const Span& y) { return x.start < y.start; };
    std::sort(r.aspects.begin(), r.aspects.end(), by_start);
    std::sort(r.opinions.begin(), r.opinions.end(), by_start);
  }
  // stage 2: sentiment of the predicted opinions; stage 3: relations
  apply_sentiments(annotated, sentiment);
  apply_relations(annotated, relation);
  save_corpus(a.out, annotated);
  out << "wrote " << annotated.size() << " annotated reviews to " << a.out << '\n';
  return kOk;
}

// ----------------------------------------------------------------- evaluate

void check_alignment(const Corpus& gold, const Corpus& pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " reviews, predictions have " +
                    std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].id != pred[i].id || gold[i].tokens != pred[i].tokens) {
      throw DataError("review " + std::to_string(i + 1) + " ('" + gold[i].id +
                      "') does not align with the predictions");
    }
  }
}

ordered_json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
          {"tp", p.tp},               {"fp", p.fp},         {"fn", p.fn}};
}

ordered_json mean_prf_json(const MeanPrf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

ordered_json accuracy_json(const Accuracy& a) {
  return {{"accuracy", a.accuracy}, {"correct", a.correct}, {"incorrect", a.incorrect}};
}

ordered_json mean_accuracy_json(const MeanAccuracy& a) {
  return {{"accuracy", a.accuracy}, {"correct", a.correct}, {"incorrect", a.incorrect}};
}

void print_prf_header(std::ostream& out, const std::string& first) {
  out << pad(first, 16) << pad("P", 8) << pad("R", 8) << pad("F1", 8) << '\n';
}

void print_prf_row(std::ostream& out, const std::string& name, double p, double r, double f) {
  out << pad(name, 16) << pad(num(p), 8) << pad(num(r), 8) << pad(num(f), 8) << '\n';
}

void print_accuracy_row(std::ostream& out, const std::string& name, double acc, double correct,
                        double incorrect, int count_digits) {
  out << pad(name, 16) << pad(num(acc), 10) << pad(num(correct, count_digits), 10)
      << pad(num(incorrect, count_digits), 10) << '\n';
}

std::vector<std::vector<Sentiment>> opinion_labels(const Corpus& corpus, bool require) {
  std::vector<std::vector<Sentiment>> out;
  for (const Review& r : corpus) {
    std::vector<Sentiment> labels;
    for (const Span& o : r.opinions) {
      if (!o.sentiment) {
        if (require) throw DataError("review '" + r.id + "' has an opinion without a sentiment");
        continue;
      }
      labels.push_back(*o.sentiment);
    }
    out.push_back(std::move(labels));
  }
  return out;
}

int evaluate_files(const EvaluateArgs& a, const CommonOptions& c, std::ostream& out) {
  if (a.predictions.empty()) throw UsageError("--predictions is required for mode " + a.mode);
  const Corpus gold = load_corpus(a.corpus);
  const Corpus pred = load_corpus(a.predictions);
  check_alignment(gold, pred);
  ordered_json report;
  report["mode"] = a.mode;

  if (a.mode == "terms") {
    std::vector<std::vector<Span>> ga, pa, go, po;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      ga.push_back(gold[i].aspects);
      pa.push_back(pred[i].aspects);
      go.push_back(gold[i].opinions);
      po.push_back(pred[i].opinions);
    }
    const Prf asp = strict_prf(ga, pa);
    const Prf opi = strict_prf(go, po);
    report["aspects"] = prf_json(asp);
    report["opinions"] = prf_json(opi);
    if (!c.json) {
      print_prf_header(out, "role");
      print_prf_row(out, "aspects", asp.precision, asp.recall, asp.f1);
      print_prf_row(out, "opinions", opi.precision, opi.recall, opi.f1);
    }
  } else if (a.mode == "sentiment") {
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (gold[i].opinions.size() != pred[i].opinions.size()) {
        throw DataError("review '" + gold[i].id + "': opinion lists differ; predict sentiment on "
                        "the gold opinion spans");
      }
      for (std::size_t j = 0; j < gold[i].opinions.size(); ++j) {
        if (!gold[i].opinions[j].same_extent(pred[i].opinions[j])) {
          throw DataError("review '" + gold[i].id + "': opinion " + std::to_string(j) +
                          " has different boundaries in the predictions");
        }
      }
    }
    const auto g = opinion_labels(gold, true);
    const Accuracy model = sentiment_accuracy(g, opinion_labels(pred, true));
    const Accuracy base = sentiment_accuracy(g, majority_baseline(gold));
    report["positive_only"] = accuracy_json(base);
    report["predicted"] = accuracy_json(model);
    if (!c.json) {
      out << pad("model", 16) << pad("accuracy", 10) << pad("#correct", 10) << pad("#incorrect", 10)
          << '\n';
      print_accuracy_row(out, "Positive Only", base.accuracy, static_cast<double>(base.correct),
                         static_cast<double>(base.incorrect), 0);
      print_accuracy_row(out, "Predicted", model.accuracy, static_cast<double>(model.correct),
                         static_cast<double>(model.incorrect), 0);
    }
  } else if (a.mode == "relations") {
    std::vector<std::vector<RelationKey>> gk, pk;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      gk.push_back(relation_keys(gold[i], gold[i].relations));
      pk.push_back(relation_keys(pred[i], pred[i].relations));
    }
    const Prf rel = relation_prf(gk, pk);
    report["relations"] = prf_json(rel);
    if (!c.json) {
      print_prf_header(out, "model");
      print_prf_row(out, "Predicted", rel.precision, rel.recall, rel.f1);
    }
  } else {
    throw UsageError("--mode must be terms, sentiment, relations or cv");
  }
  if (c.json) out << report.dump(2) << '\n';
  return kOk;
}

int evaluate_cv(const EvaluateArgs& a, const ModelOptions& m, const CommonOptions& c,
                std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(a.corpus);
  CvConfig cfg;
  cfg.k = a.k;
  cfg.seed = c.seed;
  cfg.tagger_kind = parse_kind(m.kind);
  cfg.use_pos = m.use_pos;
  cfg.hyper = hyper_from(m);
  cfg.optimizer = optimizer_from(m);
  cfg.tagger_epochs = a.epochs >= 0 ? static_cast<std::size_t>(a.epochs) : a.tagger_epochs;
  cfg.sentiment_epochs = a.epochs >= 0 ? static_cast<std::size_t>(a.epochs) : a.sentiment_epochs;
  cfg.relation_epochs = a.epochs >= 0 ? static_cast<std::size_t>(a.epochs) : a.relation_epochs;
  cfg.relation_threshold = m.threshold;
  cfg.embeddings = embeddings_from(m, err);
  const CvReport r = cross_validate(corpus, cfg);

  if (c.json) {
    ordered_json j;
    j["mode"] = "cv";
    j["k"] = cfg.k;
    j["tagger_kind"] = std::string(to_string(cfg.tagger_kind));
    j["aspects"] = mean_prf_json(r.aspects);
    j["opinions"] = mean_prf_json(r.opinions);
    j["sentiment"] = r.sentiment ? mean_accuracy_json(*r.sentiment) : ordered_json();
    j["positive_only"] = r.positive_only ? mean_accuracy_json(*r.positive_only) : ordered_json();
    j["relations"] = r.relations ? mean_prf_json(*r.relations) : ordered_json();
    j["filter_recall"] = r.filter_recall;
    j["folds"] = ordered_json::array();
    for (const FoldResult& f : r.folds) {
      ordered_json fj;
      fj["aspects"] = prf_json(f.aspects);
      fj["opinions"] = prf_json(f.opinions);
      fj["sentiment"] = f.sentiment ? accuracy_json(*f.sentiment) : ordered_json();
      fj["relations"] = f.relations ? prf_json(*f.relations) : ordered_json();
      j["folds"].push_back(fj);
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "# term extraction (" << to_string(cfg.tagger_kind) << ", " << cfg.k
      << "-fold macro average)\n";
  out << pad("", 16) << pad("aspects", 24) << "opinions\n";
  out << pad("model", 16);
  for (int i = 0; i < 2; ++i) out << pad("P", 8) << pad("R", 8) << pad("F1", 8);
  out << '\n' << pad(std::string(to_string(cfg.tagger_kind)), 16);
  for (const MeanPrf* p : {&r.aspects, &r.opinions}) {
    out << pad(num(p->precision), 8) << pad(num(p->recall), 8) << pad(num(p->f1), 8);
  }
  out << "\n\n# opinion sentiment on gold spans\n";
  out << pad("model", 16) << pad("accuracy", 10) << pad("#correct", 10) << pad("#incorrect", 10)
      << '\n';
  if (r.sentiment) {
    print_accuracy_row(out, "Positive Only", r.positive_only->accuracy, r.positive_only->correct,
                       r.positive_only->incorrect, 1);
    print_accuracy_row(out, "Predicted", r.sentiment->accuracy, r.sentiment->correct,
                       r.sentiment->incorrect, 1);
  } else {
    out << "(no labeled opinions)\n";
  }
  out << "\n# aspect-opinion relations on gold spans\n";
  print_prf_header(out, "model");
  if (r.relations) print_prf_row(out, "Predicted", r.relations->precision, r.relations->recall, r.relations->f1);
  else out << "(no candidate pairs)\n";
  out << "distance filter keeps " << num(100.0 * r.filter_recall, 1) << "% of gold relations\n";
  return kOk;
}

// ----------------------------------------------------------------- gradcheck

int cmd_gradcheck(const GradcheckArgs& a, const CommonOptions& c, std::ostream& out) {
  std::vector<std::string> kinds;
  if (a.kind == "all") {
    for (auto k : gradcheck_kinds()) kinds.emplace_back(k);
  } else {
    const auto known = gradcheck_kinds();
    if (std::find(known.begin(), known.end(), a.kind) == known.end()) {
      throw UsageError("unknown gradcheck kind '" + a.kind + "'");
    }
    kinds.push_back(a.kind);
  }
  bool ok = true;
  ordered_json report = ordered_json::array();
  for (const auto& kind : kinds) {
    const GradCheckReport r = check_model_gradients(kind, c.seed, a.plant_bug ? 2.0 : 1.0);
    const bool pass = r.max_rel_error <= kGradCheckTolerance;
    ok = ok && pass;
    ordered_json entry;
    entry["kind"] = kind;
    entry["max_rel_error"] = r.max_rel_error;
    entry["pass"] = pass;
    entry["groups"] = ordered_json::array();
    if (!c.json) out << "# " << kind << '\n';
    for (const auto& g : r.groups) {
      entry["groups"].push_back({{"name", g.name}, {"max_rel_error", g.max_rel_error}});
      if (!c.json) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", g.max_rel_error);
        out << pad(g.name, 24) << buf << (g.max_rel_error <= kGradCheckTolerance ? "" : "  FAIL")
            << '\n';
      }
    }
    if (!c.json) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", r.max_rel_error);
      out << pad(kind + " max", 24) << buf << (pass ? "  ok" : "  FAIL") << "\n\n";
    }
    report.push_back(entry);
  }
  if (c.json) out << report.dump(2) << '\n';
  return ok ? kOk : kNumericFault;
}

// ----------------------------------------------------------------- inspect

int cmd_inspect(const InspectArgs& a, const CommonOptions& c, std::ostream& out) {
  const ModelBundle b = load_bundle(a.model);
  ordered_json j;
  j["format_version"] = b.format_version;
  j["kind"] = b.kind;
  j["hyperparams"] = hyperparams_to_json(b.hyper);
  j["config"] = b.config;
  j["vocabulary_size"] = b.vocabulary.size();
  if (parse_tagger_kind(b.kind)) {
    j["layer_widths"] = TaggerModel::from_bundle(b).layer_widths();
  } else if (b.kind == "sentiment") {
    j["input_width"] = SentimentModel::from_bundle(b).input_width();
  } else if (b.kind == "relation") {
    j["input_width"] = RelationModel::from_bundle(b).input_width();
  }
  j["parameters"] = ordered_json::array();
  for (const auto& arr : b.arrays) {
    j["parameters"].push_back({{"name", arr.name}, {"shape", {arr.rows, arr.cols}}});
  }
  j["parameter_count"] = b.parameter_count();
  if (c.json) {
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "kind            " << b.kind << "\nformat_version  " << b.format_version
      << "\nvocabulary      " << b.vocabulary.size() << '\n';
  if (j.contains("layer_widths")) {
    out << "layer widths    ";
    const auto widths = j["layer_widths"].get<std::vector<std::size_t>>();
    for (std::size_t i = 0; i < widths.size(); ++i) out << (i ? "-" : "") << widths[i];
    out << '\n';
  }
  if (j.contains("input_width")) out << "input width     " << j["input_width"].get<std::size_t>() << '\n';
  for (const auto& arr : b.arrays) {
    out << "  " << pad(arr.name, 24) << arr.rows << " x " << arr.cols << '\n';
  }
  out << "parameters      " << b.parameter_count() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aspect/opinion term extraction, opinion sentiment and relation extraction"};
  app.require_subcommand(1);
  CommonOptions common;
  ModelOptions model;
  TrainArgs train;
  PredictArgs predict;
  PipelineArgs pipeline;
  EvaluateArgs evaluate;
  GradcheckArgs gradcheck;
  InspectArgs inspect;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "master random seed");
    sub->add_flag("--json", common.json, "emit the report as JSON");
  };

  CLI::App* t = app.add_subcommand("train", "train one stage and write a model bundle");
  t->add_option("--stage", train.stage, "terms, sentiment or relations")->required();
  t->add_option("--corpus", train.corpus, "JSONL training corpus")->required()->check(CLI::ExistingFile);
  t->add_option("--out", train.out, "bundle to write")->required();
  t->add_option("--epochs", train.epochs, "epochs (default 15 / 14 / 28 by stage)");
  add_model_options(t, model);
  add_common(t);

  CLI::App* p = app.add_subcommand("predict", "apply one stage's model to a corpus");
  p->add_option("--stage", predict.stage, "terms, sentiment or relations")->required();
  p->add_option("--model", predict.model, "model bundle")->required()->check(CLI::ExistingFile);
  p->add_option("--corpus", predict.corpus, "JSONL corpus")->required()->check(CLI::ExistingFile);
  p->add_option("--out", predict.out, "JSONL output")->required();
  add_common(p);

  CLI::App* pl = app.add_subcommand("pipeline", "terms, then sentiment, then relations");
  pl->add_option("--corpus", pipeline.corpus, "JSONL corpus")->required()->check(CLI::ExistingFile);
  pl->add_option("--terms-model", pipeline.terms_models,
                 "joint tagger, or an aspect tagger and an opinion tagger")
      ->required()
      ->check(CLI::ExistingFile);
  pl->add_option("--sentiment-model", pipeline.sentiment_model)->required()->check(CLI::ExistingFile);
  pl->add_option("--relation-model", pipeline.relation_model)->required()->check(CLI::ExistingFile);
  pl->add_option("--out", pipeline.out, "JSONL output")->required();
  add_common(pl);

  CLI::App* e = app.add_subcommand("evaluate", "score predictions or run cross-validation");
  e->add_option("--mode", evaluate.mode, "terms, sentiment, relations or cv")->required();
  e->add_option("--corpus", evaluate.corpus, "gold JSONL corpus")->required()->check(CLI::ExistingFile);
  e->add_option("--predictions", evaluate.predictions, "predicted JSONL corpus")
      ->check(CLI::ExistingFile);
  e->add_option("--k", evaluate.k, "folds for cv");
  e->add_option("--epochs", evaluate.epochs, "epochs for every cv stage");
  e->add_option("--tagger-epochs", evaluate.tagger_epochs);
  e->add_option("--sentiment-epochs", evaluate.sentiment_epochs);
  e->add_option("--relation-epochs", evaluate.relation_epochs);
  add_model_options(e, model);
  add_common(e);

  CLI::App* g = app.add_subcommand("gradcheck", "finite-difference check of a tiny model");
  g->add_option("--kind", gradcheck.kind, "cnn, rnn, stacked, joint, sentiment, relation or all");
  g->add_flag("--plant-bug", gradcheck.plant_bug, "double analytic gradients (checker self-test)");
  add_common(g);

  CLI::App* in = app.add_subcommand("inspect", "print a bundle's header and layer sizes");
  in->add_option("--model", inspect.model, "model bundle")->required()->check(CLI::ExistingFile);
  add_common(in);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (t->parsed()) return cmd_train(train, model, common, out, err);
    if (p->parsed()) return cmd_predict(predict, out);
    if (pl->parsed()) return cmd_pipeline(pipeline, out);
    if (e->parsed()) {
      if (evaluate.mode == "cv") return evaluate_cv(evaluate, model, common, out, err);
      return evaluate_files(evaluate, common, out);
    }
    if (g->parsed()) return cmd_gradcheck(gradcheck, common, out);
    if (in->parsed()) return cmd_inspect(inspect, common, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const NumericError& ex) {
    err << "numeric fault: " << ex.what() << '\n';
    return kNumericFault;
  } catch (const DataError& ex) {
    err << "data fault: " << ex.what() << '\n';
    return kDataFault;
  } catch (const ShapeError& ex) {
    err << "data fault: " << ex.what() << '\n';
    return kDataFault;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kDataFault;
  }
  return kUsage;
}

}  // namespace absa::cli
