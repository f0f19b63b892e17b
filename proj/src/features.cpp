// SPDX-License-Identifier: Apache-2.0
#include "absa/features.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "absa/errors.hpp"

namespace absa {

void HyperParams::validate() const {
  const std::array<std::size_t, 13> sizes = {
      word_dim,        pos_dim,         dist_dim,        conv_maps,     conv_width,
      gru_units,       polarity_units,  relation_units,  polarity_window, relation_window,
      maxout_pieces,   distance_clip,   max_pair_gap};
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("hyperparameters must all be positive");
  }
  if (conv_width % 2 == 0) throw std::invalid_argument("convolution width must be odd");
  if (pos_dim != kPosTagCount) {
    throw std::invalid_argument("POS width must equal the tag set size (46)");
  }
  if (maxout_pieces < 2) throw std::invalid_argument("maxout needs at least two pieces");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("dropout must be in [0,1)");
}

// ------------------------------------------------------------- vocabulary

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Vocabulary::Vocabulary() {
  words_ = {std::string(kPad), std::string(kUnk)};
  index_.emplace(words_[0], 0);
  index_.emplace(words_[1], 1);
}

std::size_t Vocabulary::add(std::string_view word) {
  std::string key = lowercase(word);
  auto [it, inserted] = index_.emplace(key, words_.size());
  if (inserted) words_.push_back(std::move(key));
  return it->second;
}

std::size_t Vocabulary::index_of(std::string_view word) const {
  auto it = index_.find(lowercase(word));
  return it == index_.end() ? unk_index() : it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return index_.count(lowercase(word)) > 0;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
  if (words.size() < 2 || words[0] != kPad || words[1] != kUnk) {
    throw DataError("vocabulary must start with <PAD>, <UNK>");
  }
  Vocabulary v;
  for (std::size_t i = 2; i < words.size(); ++i) {
    if (v.add(words[i]) != i) throw DataError("duplicate vocabulary entry '" + words[i] + "'");
  }
  return v;
}

WordEmbeddings read_embeddings(std::istream& in, std::size_t trim_to, std::size_t expected_dim) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw DataError("embedding file is empty");
  std::istringstream header(line);
  long long count = -1;
  long long dim = -1;
  if (!(header >> count >> dim) || count < 0 || dim <= 0) {
    throw DataError("embedding line 1: expected header \"count dim\"");
  }
  if (static_cast<std::size_t>(dim) != expected_dim) {
    throw DataError("embedding dimension " + std::to_string(dim) + " != expected " +
                    std::to_string(expected_dim));
  }

  Vocabulary vocab;
  std::vector<double> rows;
  std::vector<double> values(expected_dim);
  while (vocab.size() - 2 < trim_to && std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    for (std::size_t k = 0; k < expected_dim; ++k) {
      if (!(fields >> values[k])) {
        throw DataError("embedding line " + std::to_string(line_no) + ": expected " +
                        std::to_string(expected_dim) + " values");
      }
    }
    std::string extra;
    if (fields >> extra) {
      throw DataError("embedding line " + std::to_string(line_no) + ": too many values");
    }
    if (vocab.contains(word)) continue;
    vocab.add(word);
    rows.insert(rows.end(), values.begin(), values.end());
  }

  WordEmbeddings out{std::move(vocab), Tensor2()};
  const std::size_t kept = out.vocab.size() - 2;
  out.table = Tensor2(out.vocab.size(), expected_dim);
  for (std::size_t w = 0; w < kept; ++w) {
    std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(w * expected_dim), expected_dim,
                out.table.row(w + 2).begin());
  }
  if (kept > 0) {
    auto unk = out.table.row(out.vocab.unk_index());
    for (std::size_t w = 0; w < kept; ++w) {
      for (std::size_t k = 0; k < expected_dim; ++k) unk[k] += out.table(w + 2, k);
    }
    for (double& v : unk) v /= static_cast<double>(kept);
  }
  return out;
}

WordEmbeddings load_embeddings(const std::filesystem::path& path, std::size_t trim_to,
                               std::size_t expected_dim) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path.string());
  return read_embeddings(in, trim_to, expected_dim);
}

WordEmbeddings random_embeddings(const Corpus& corpus, std::size_t dim, Rng& rng) {
  WordEmbeddings out;
  for (const Review& r : corpus) {
    for (const auto& t : r.tokens) out.vocab.add(t);
  }
  out.table = Tensor2(out.vocab.size(), dim);
  for (std::size_t w = 1; w < out.vocab.size(); ++w) {
    for (double& v : out.table.row(w)) v = rng.uniform(-0.05, 0.05);
  }
  return out;
}

// ------------------------------------------------------------- POS tags

namespace {
constexpr std::array<std::string_view, kPosTagCount> kPennTags = {
    "CC",  "CD",   "DT",  "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS", "LS",   "MD",  "NN",
    "NNS", "NNP",  "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS",  "RP",  "SYM",
    "TO",  "UH",   "VB",  "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",   "WP$", "WRB",
    "#",   "$",    ".",   ",",   ":",   "(",   ")",   "``",  "''",  "<PAD>"};
}  // namespace

std::span<const std::string_view> pos_tag_set() { return kPennTags; }

std::size_t pos_index(std::string_view tag) {
  if (tag == "-LRB-") tag = "(";
  if (tag == "-RRB-") tag = ")";
  for (std::size_t i = 0; i < kPosPadding; ++i) {
    if (kPennTags[i] == tag) return i;
  }
  return kPosPadding;
}

// ------------------------------------------------------------- distances

std::size_t DistanceIndexer::index(long long distance) const {
  const auto c = static_cast<long long>(clip);
  return static_cast<std::size_t>(std::clamp(distance, -c, c) + c);
}

std::vector<long long> relative_distances(std::size_t length, const Span& span) {
  if (span.start >= span.end || span.end > length) {
    throw DataError("span [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                    ") out of range for length " + std::to_string(length));
  }
  std::vector<long long> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    const auto pos = static_cast<long long>(i);
    if (i < span.start) out[i] = pos - static_cast<long long>(span.start);
    else if (i >= span.end) out[i] = pos - static_cast<long long>(span.end) + 1;
    else out[i] = 0;
  }
  return out;
}

Window extract_window(std::size_t length, std::span<const Span> focus, std::size_t width) {
  if (width == 0) throw std::invalid_argument("window width must be positive");
  if (focus.empty() || focus.size() > 2) {
    throw std::invalid_argument("window needs one or two focus spans");
  }
  for (const Span& s : focus) {
    if (s.start >= s.end || s.end > length) throw DataError("focus span out of range");
  }
  if (length <= width) return {0, length, width - length};

  auto center = [](const Span& s) { return (s.start + s.end - 1) / 2; };
  const std::size_t c =
      focus.size() == 1 ? center(focus[0]) : (center(focus[0]) + center(focus[1])) / 2;
  const auto lo = static_cast<long long>(c) - static_cast<long long>(width / 2);
  const auto hi = lo + static_cast<long long>(width);
  if (lo < 0) return {0, width, 0};
  if (hi > static_cast<long long>(length)) return {length - width, length, 0};
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), 0};
}

// ------------------------------------------------------------- assembly

EncodedTokens encode_tokens(const Review& review, const Vocabulary& vocab) {
  EncodedTokens out;
  out.words.reserve(review.tokens.size());
  out.pos.reserve(review.tokens.size());
  for (const auto& t : review.tokens) out.words.push_back(vocab.index_of(t));
  for (const auto& p : review.pos) out.pos.push_back(pos_index(p));
  return out;
}

WindowFeatures window_features(const EncodedTokens& tokens, std::span<const Span> focus,
                               std::size_t width, const DistanceIndexer& indexer,
                               std::size_t pad_word) {
  const std::size_t length = tokens.words.size();
  WindowFeatures f;
  f.window = extract_window(length, focus, width);
  const std::size_t pad = f.window.left_pad;
  f.words.assign(pad, pad_word);
  f.pos.assign(pad, kPosPadding);
  f.words.insert(f.words.end(), tokens.words.begin() + static_cast<std::ptrdiff_t>(f.window.begin),
                 tokens.words.begin() + static_cast<std::ptrdiff_t>(f.window.end));
  f.pos.insert(f.pos.end(), tokens.pos.begin() + static_cast<std::ptrdiff_t>(f.window.begin),
               tokens.pos.begin() + static_cast<std::ptrdiff_t>(f.window.end));
  for (const Span& s : focus) {
    const auto d = relative_distances(length, s);
    std::vector<std::size_t> row(pad, indexer.padding_index());
    for (std::size_t i = f.window.begin; i < f.window.end; ++i) row.push_back(indexer.index(d[i]));
    f.distances.push_back(std::move(row));
  }
  return f;
}

Tensor2 assemble_input(const Tensor2& words, std::span<const std::size_t> pos,
                       std::span<const Tensor2> distances) {
  const std::size_t n = words.rows();
  if (!pos.empty() && pos.size() != n) throw ShapeError("assemble_input: POS length mismatch");
  std::size_t width = words.cols() + (pos.empty() ? 0 : kPosTagCount);
  for (const Tensor2& d : distances) {
    if (d.rows() != n) throw ShapeError("assemble_input: distance length mismatch");
    width += d.cols();
  }
  Tensor2 out(n, width);
  for (std::size_t i = 0; i < n; ++i) {
    auto dst = std::copy(words.row(i).begin(), words.row(i).end(), out.row(i).begin());
    if (!pos.empty()) {
      if (pos[i] >= kPosTagCount) throw ShapeError("assemble_input: POS index out of range");
      dst[static_cast<std::ptrdiff_t>(pos[i])] = 1.0;
      dst += kPosTagCount;
    }
    for (const Tensor2& d : distances) dst = std::copy(d.row(i).begin(), d.row(i).end(), dst);
  }
  return out;
}

}  // namespace absa
