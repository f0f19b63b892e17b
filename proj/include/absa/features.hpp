// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absa/annotation.hpp"
#include "absa/corpus.hpp"
#include "absa/rng.hpp"
#include "absa/tensor.hpp"

namespace absa {

/// Layer widths and window sizes shared by all models.
struct HyperParams {
  std::size_t word_dim = 100;
  std::size_t pos_dim = 46;
  std::size_t dist_dim = 10;
  std::size_t conv_maps = 50;
  std::size_t conv_width = 3;
  std::size_t gru_units = 100;
  std::size_t polarity_units = 100;
  std::size_t relation_units = 100;
  std::size_t polarity_window = 20;
  std::size_t relation_window = 20;
  std::size_t maxout_pieces = 2;
  std::size_t distance_clip = 20;
  std::size_t max_pair_gap = 20;
  double dropout = 0.5;

  /// Throws std::invalid_argument on a zero size, an even convolution width,
  /// a POS width other than the tag set's, fewer than two maxout pieces or a
  /// dropout rate outside [0, 1).
  void validate() const;
  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

// ------------------------------------------------------------- vocabulary

class Vocabulary {
 public:
  static constexpr std::string_view kPad = "<PAD>";
  static constexpr std::string_view kUnk = "<UNK>";

  Vocabulary();
  /// Adds a (lowercased) word unless present; returns its index.
  std::size_t add(std::string_view word);
  /// Index of the lowercased word, or unk_index().
  std::size_t index_of(std::string_view word) const;
  bool contains(std::string_view word) const;

  std::size_t pad_index() const { return 0; }
  std::size_t unk_index() const { return 1; }
  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  const std::vector<std::string>& words() const { return words_; }

  /// Rebuilds from a stored word list whose first two entries are <PAD>,
  /// <UNK>. Throws DataError otherwise.
  static Vocabulary from_words(std::vector<std::string> words);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::string lowercase(std::string_view s);

/// Vocabulary plus its |V| x D embedding rows.
struct WordEmbeddings {
  Vocabulary vocab;
  Tensor2 table;
};

/// Reads word2vec text vectors: header "count dim", then "word v1 ... vdim".
/// Words are lowercased; later duplicates are skipped. The first `trim_to`
/// distinct words are kept (files are frequency ordered). <UNK> gets the mean
/// of the kept vectors, <PAD> zeros. Throws DataError on a dimension
/// mismatch or a malformed line (with its line number).
WordEmbeddings read_embeddings(std::istream& in, std::size_t trim_to, std::size_t expected_dim);
WordEmbeddings load_embeddings(const std::filesystem::path& path, std::size_t trim_to,
                               std::size_t expected_dim);

/// Vocabulary of every corpus token (first-appearance order) with rows drawn
/// from uniform(-0.05, 0.05); <PAD> stays zero.
WordEmbeddings random_embeddings(const Corpus& corpus, std::size_t dim, Rng& rng);

// ------------------------------------------------------------- POS tags

/// 45 Penn Treebank tags followed by the padding tag.
std::span<const std::string_view> pos_tag_set();
inline constexpr std::size_t kPosTagCount = 46;
inline constexpr std::size_t kPosPadding = 45;
/// Unknown tags map to the padding slot. -LRB-/-RRB- alias ( and ).
std::size_t pos_index(std::string_view tag);

// ------------------------------------------------------------- distances

/// Signed offsets clamped to +-clip, plus one padding slot at the end.
struct DistanceIndexer {
  std::size_t clip = 20;

  std::size_t table_size() const { return 2 * clip + 2; }
  std::size_t padding_index() const { return 2 * clip + 1; }
  std::size_t index(long long distance) const;
};

/// Per-token offset from the span: 0 inside, -k k tokens to the left,
/// +k k tokens to the right. Throws DataError if the span exceeds length.
std::vector<long long> relative_distances(std::size_t length, const Span& span);

/// Token range [begin, end) kept from the text plus the left padding needed
/// to reach the window width.
struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t left_pad = 0;
  friend bool operator==(const Window&, const Window&) = default;
};

/// Window of `width` tokens around one span (its center token) or two spans
/// (midpoint of their centers). Half-open [c - w/2, c + ceil(w/2)), shifted
/// back inside the text when it runs over an edge. Texts shorter than the
/// window are kept whole and padded on the left.
Window extract_window(std::size_t length, std::span<const Span> focus, std::size_t width);

// ------------------------------------------------------------- assembly

/// Word and POS indices of a review's tokens.
struct EncodedTokens {
  std::vector<std::size_t> words;
  std::vector<std::size_t> pos;
};

EncodedTokens encode_tokens(const Review& review, const Vocabulary& vocab);

/// Index sequences for a windowed classifier input: words, POS and one
/// distance sequence per focus span, all of length `width`.
struct WindowFeatures {
  std::vector<std::size_t> words;
  std::vector<std::size_t> pos;
  std::vector<std::vector<std::size_t>> distances;
  Window window;
};

WindowFeatures window_features(const EncodedTokens& tokens, std::span<const Span> focus,
                               std::size_t width, const DistanceIndexer& indexer,
                               std::size_t pad_word);

/// Row n = word row n, then the one-hot of pos[n] (omitted when `pos` is
/// empty), then each distance row n. Throws ShapeError on length mismatch.
Tensor2 assemble_input(const Tensor2& words, std::span<const std::size_t> pos,
                       std::span<const Tensor2> distances);

}  // namespace absa
