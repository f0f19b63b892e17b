// SPDX-License-Identifier: Apache-2.0
#include "absa/tagger.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "absa/bundle.hpp"
#include "absa/errors.hpp"
#include "absa/loss.hpp"
#include "absa/rmsprop.hpp"

namespace absa {

std::string_view to_string(TaggerKind kind) {
  switch (kind) {
    case TaggerKind::Cnn: return "cnn";
    case TaggerKind::Rnn: return "rnn";
    case TaggerKind::Stacked: return "stacked";
    case TaggerKind::JointSmall: return "joint-small";
    case TaggerKind::JointLarge: return "joint-large";
  }
  return "stacked";
}

std::optional<TaggerKind> parse_tagger_kind(std::string_view text) {
  if (text == "cnn") return TaggerKind::Cnn;
  if (text == "rnn") return TaggerKind::Rnn;
  if (text == "stacked") return TaggerKind::Stacked;
  if (text == "joint" || text == "joint-small") return TaggerKind::JointSmall;
  if (text == "joint-large") return TaggerKind::JointLarge;
  return std::nullopt;
}

bool is_joint(TaggerKind kind) {
  return kind == TaggerKind::JointSmall || kind == TaggerKind::JointLarge;
}

struct TaggerModel::Trace {
  std::vector<std::size_t> words;
  std::vector<Conv1D::Trace> convs;
  std::vector<Tensor2> masks;
  Gru::Trace gru;
  std::vector<Dense::Trace> heads;
};

TaggerModel::TaggerModel(TaggerConfig config, WordEmbeddings embeddings, std::uint64_t seed)
    : config_(std::move(config)),
      vocab_(std::move(embeddings.vocab)),
      words_("word_embedding", embeddings.table.rows(), embeddings.table.cols()),
      dropout_(config_.hyper.dropout) {
  const HyperParams& hp = config_.hyper;
  hp.validate();
  if (embeddings.table.cols() != hp.word_dim || embeddings.table.rows() != vocab_.size()) {
    throw ShapeError("tagger: embedding table does not match vocabulary / word_dim");
  }
  words_.table.value = std::move(embeddings.table);

  const std::size_t scale = config_.kind == TaggerKind::JointLarge ? 2 : 1;
  const std::size_t maps = hp.conv_maps * scale;
  const std::size_t units = hp.gru_units * scale;
  std::size_t width = hp.word_dim + (config_.use_pos ? hp.pos_dim : 0);

  Rng rng(derive_seed(seed, kInitStream));
  if (has_convs()) {
    for (std::size_t i = 0; i < kConvLayers; ++i) {
      convs_.emplace_back("conv" + std::to_string(i), width, maps, hp.conv_width);
      convs_.back().init(rng);
      width = maps;
    }
  }
  if (has_gru()) {
    gru_.emplace("gru", width, units);
    gru_->init(rng);
    width = units;
  }
  for (Role role : head_roles()) {
    heads_.emplace_back(std::string("head.") + std::string(to_string(role)), width,
                        iob2::kTagCount, Activation::Identity);
    heads_.back().init(rng);
  }
}

bool TaggerModel::has_convs() const { return config_.kind != TaggerKind::Rnn; }
bool TaggerModel::has_gru() const { return config_.kind != TaggerKind::Cnn; }

std::vector<Role> TaggerModel::head_roles() const {
  if (is_joint(config_.kind)) return {Role::Aspect, Role::Opinion};
  return {config_.role};
}

std::vector<std::size_t> TaggerModel::layer_widths() const {
  std::vector<std::size_t> w = {words_.width() + (config_.use_pos ? kPosTagCount : 0)};
  for (const Conv1D& c : convs_) w.push_back(c.maps());
  if (gru_) w.push_back(gru_->hidden());
  w.push_back(iob2::kTagCount);
  return w;
}

std::vector<Parameter*> TaggerModel::parameters() {
  std::vector<Parameter*> out = {&words_.table};
  for (Conv1D& c : convs_) {
    out.push_back(&c.kernel);
    out.push_back(&c.bias);
  }
  if (gru_) {
    for (Parameter* p : gru_->parameters()) out.push_back(p);
  }
  for (Dense& h : heads_) {
    out.push_back(&h.weight);
    out.push_back(&h.bias);
  }
  return out;
}

std::vector<const Parameter*> TaggerModel::parameters() const {
  auto mut = const_cast<TaggerModel*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

std::vector<Tensor2> TaggerModel::forward_logits(const EncodedTokens& tokens, Mode mode,
                                                 Rng* rng, Trace* trace) const {
  const Tensor2 word_rows = words_.forward(tokens.words);
  const std::span<const std::size_t> pos =
      config_.use_pos ? std::span<const std::size_t>(tokens.pos) : std::span<const std::size_t>();
  Tensor2 h = assemble_input(word_rows, pos, {});
  if (trace) {
    trace->words = tokens.words;
    trace->convs.resize(convs_.size());
    trace->masks.resize(convs_.size());
  }
  for (std::size_t i = 0; i < convs_.size(); ++i) {
    h = convs_[i].forward(h, trace ? &trace->convs[i] : nullptr);
    h = dropout_.forward(h, mode, rng, trace ? &trace->masks[i] : nullptr);
  }
  if (gru_) h = gru_->forward(h, trace ? &trace->gru : nullptr);
  std::vector<Tensor2> logits;
  if (trace) trace->heads.resize(heads_.size());
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    logits.push_back(heads_[k].forward(h, trace ? &trace->heads[k] : nullptr));
  }
  return logits;
}

void TaggerModel::backward(const Trace& trace, const std::vector<Tensor2>& logit_grads) {
  Tensor2 dh = heads_[0].backward(trace.heads[0], logit_grads[0]);
  for (std::size_t k = 1; k < heads_.size(); ++k) dh += heads_[k].backward(trace.heads[k], logit_grads[k]);
  if (gru_) dh = gru_->backward(trace.gru, dh);
  for (std::size_t i = convs_.size(); i-- > 0;) {
    dh = Dropout::backward(trace.masks[i], dh);
    dh = convs_[i].backward(trace.convs[i], dh);
  }
  words_.backward(trace.words, dh.slice_cols(0, words_.width()));
}

std::vector<Tensor2> TaggerModel::probabilities(const EncodedTokens& tokens) const {
  std::vector<Tensor2> out;
  for (Tensor2& logits : forward_logits(tokens, Mode::Infer, nullptr, nullptr)) {
    out.push_back(softmax_rows(logits));
  }
  return out;
}

double TaggerModel::loss(const EncodedTokens& tokens,
                         const std::vector<std::vector<iob2::Tag>>& gold, Mode mode,
                         Rng* dropout_rng, bool do_backward) {
  if (gold.size() != heads_.size()) throw ShapeError("tagger loss: one gold sequence per head");
  Trace trace;
  const auto logits = forward_logits(tokens, mode, dropout_rng, do_backward ? &trace : nullptr);
  double total = 0.0;
  std::vector<Tensor2> grads;
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    std::vector<std::size_t> targets;
    for (iob2::Tag t : gold[k]) targets.push_back(static_cast<std::size_t>(t));
    CrossEntropy ce = cross_entropy(softmax_rows(logits[k]), targets);
    const double weight = k == 0 ? 1.0 : config_.second_head_weight;
    total += weight * ce.loss;
    for (double& g : ce.logit_grad.data()) g *= weight;
    grads.push_back(std::move(ce.logit_grad));
  }
  if (do_backward) backward(trace, grads);
  return total;
}

std::vector<std::vector<iob2::Tag>> TaggerModel::gold_tags(const Review& review) const {
  std::vector<std::vector<iob2::Tag>> out;
  for (Role role : head_roles()) out.push_back(iob2::encode(review.spans(role), review.tokens.size()));
  return out;
}

ModelBundle TaggerModel::to_bundle() const {
  ModelBundle b;
  b.kind = std::string(to_string(config_.kind));
  b.hyper = config_.hyper;
  b.config["use_pos"] = config_.use_pos;
  b.config["role"] = std::string(to_string(config_.role));
  b.config["second_head_weight"] = config_.second_head_weight;
  b.vocabulary = vocab_.words();
  store_parameters(b, parameters());
  return b;
}

TaggerModel TaggerModel::from_bundle(const ModelBundle& b) {
  const auto kind = parse_tagger_kind(b.kind);
  if (!kind) throw DataError("bundle kind '" + b.kind + "' is not a tagger");
  TaggerConfig config;
  config.kind = *kind;
  config.hyper = b.hyper;
  try {
    config.use_pos = b.config.at("use_pos").get<bool>();
    config.role = b.config.at("role").get<std::string>() == "opinion" ? Role::Opinion : Role::Aspect;
    config.second_head_weight = b.config.at("second_head_weight").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("tagger bundle config: ") + e.what());
  }
  WordEmbeddings emb{Vocabulary::from_words(b.vocabulary), Tensor2()};
  emb.table = Tensor2(emb.vocab.size(), b.hyper.word_dim);
  TaggerModel model(config, std::move(emb), 0);
  restore_parameters(b, model.parameters());
  return model;
}

iob2::Tag argmax_tag(std::span<const double> p) {
  using iob2::Tag;
  Tag best = Tag::O;
  for (Tag t : {Tag::B, Tag::I}) {
    if (p[static_cast<std::size_t>(t)] > p[static_cast<std::size_t>(best)]) best = t;
  }
  return best;
}

std::vector<RoleTags> tag_sequence(const TaggerModel& model, const Review& review) {
  const EncodedTokens tokens = encode_tokens(review, model.vocab());
  const auto roles = model.head_roles();
  std::vector<RoleTags> out;
  if (tokens.words.empty()) {
    for (Role r : roles) out.push_back({r, {}});
    return out;
  }
  const auto probs = model.probabilities(tokens);
  for (std::size_t k = 0; k < roles.size(); ++k) {
    std::vector<iob2::Tag> tags;
    for (std::size_t n = 0; n < probs[k].rows(); ++n) tags.push_back(argmax_tag(probs[k].row(n)));
    out.push_back({roles[k], iob2::repair(tags)});
  }
  return out;
}

Trained<TaggerModel> train_tagger(const Corpus& corpus, const TaggerConfig& config,
                                  const TrainOptions& options,
                                  std::optional<WordEmbeddings> embeddings) {
  if (corpus.empty()) throw DataError("cannot train a tagger on an empty corpus");
  options.optimizer.validate();
  if (!embeddings) {
    Rng emb_rng(derive_seed(options.seed, kInitStream + 100));
    embeddings = random_embeddings(corpus, config.hyper.word_dim, emb_rng);
  }
  Trained<TaggerModel> out{TaggerModel(config, std::move(*embeddings), options.seed), {}};
  TaggerModel& model = out.model;

  std::vector<EncodedTokens> inputs;
  std::vector<std::vector<std::vector<iob2::Tag>>> gold;
  for (const Review& r : corpus) {
    inputs.push_back(encode_tokens(r, model.vocab()));
    gold.push_back(model.gold_tags(r));
  }

  Rng shuffle_rng(derive_seed(options.seed, kShuffleStream));
  Rng dropout_rng(derive_seed(options.seed, kDropoutStream));
  std::vector<std::size_t> order(corpus.size());
  auto params = model.parameters();
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    shuffle_rng.shuffle(order);
    double total = 0.0;
    std::size_t samples = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::size_t idx = order[i];
      if (inputs[idx].words.empty()) continue;
      const double l = model.loss(inputs[idx], gold[idx], Mode::Train, &dropout_rng, true);
      if (!std::isfinite(l)) {
        throw NumericError("non-finite tagger loss at epoch " + std::to_string(epoch + 1) +
                           ", sample " + std::to_string(i) + " (review '" + corpus[idx].id + "')");
      }
      rmsprop_step(params, options.optimizer);
      total += l;
      ++samples;
    }
    const double mean = samples ? total / static_cast<double>(samples) : 0.0;
    out.epoch_loss.push_back(mean);
    if (options.on_epoch) options.on_epoch(epoch + 1, mean);
  }
  return out;
}

std::vector<std::vector<Span>> predict_corpus(const TaggerModel& model, const Corpus& corpus) {
  std::vector<std::vector<Span>> out;
  out.reserve(corpus.size());
  for (const Review& r : corpus) {
    std::vector<Span> spans;
    for (const RoleTags& rt : tag_sequence(model, r)) {
      for (Span& s : iob2::decode(rt.tags, rt.role)) spans.push_back(s);
    }
    out.push_back(std::move(spans));
  }
  return out;
}

}  // namespace absa
