// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "absa/annotation.hpp"

namespace absa {

/// (aspect index, opinion index) into the review's span lists.
using RelationPair = std::pair<std::size_t, std::size_t>;

struct Review {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> pos;
  std::vector<Span> aspects;
  std::vector<Span> opinions;
  std::vector<RelationPair> relations;

  const std::vector<Span>& spans(Role role) const {
    return role == Role::Aspect ? aspects : opinions;
  }

  /// Throws DataError describing the first violated invariant: POS length,
  /// span ranges, per-role overlap, relation indices, span roles.
  void validate() const;

  friend bool operator==(const Review&, const Review&) = default;
};

using Corpus = std::vector<Review>;

/// Degenerate stand-in for a real POS tagger, used when a corpus line has no
/// "pos" field: punctuation maps to its Penn tag, numbers to CD, all else NN.
std::vector<std::string> fallback_pos_tags(const std::vector<std::string>& tokens);

/// JSON-lines corpus: one review object per line with fields
/// id, tokens, pos, aspects, opinions, relations. Spans are
/// {"start": s, "end": e} with an optional "sentiment" on opinions; relations
/// are [aspect_index, opinion_index] arrays. Blank lines are skipped.
/// Throws DataError with the 1-based line number on any malformed line.
Corpus read_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);

/// One compact JSON object per line, fields in schema order.
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

std::string review_to_json_line(const Review& review);

}  // namespace absa
