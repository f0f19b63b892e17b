// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absa/annotation.hpp"

namespace absa::iob2 {

/// Tagger output order is I, O, B.
enum class Tag { I = 0, O = 1, B = 2 };

inline constexpr std::size_t kTagCount = 3;

char to_char(Tag t);
std::string to_string(std::span<const Tag> tags);  // "O B I O"
/// Parses whitespace-separated I/O/B letters. Throws DataError otherwise.
std::vector<Tag> parse(std::string_view text);

/// Spans of one role to tags. Throws DataError on overlap or out-of-range.
std::vector<Tag> encode(std::span<const Span> spans, std::size_t length);

/// True when no I follows an O and the sequence does not start with I.
bool is_valid(std::span<const Tag> tags);

/// Inverse of encode. Throws DataError if the sequence is not valid; callers
/// repair predicted sequences first. Spans get the given role.
std::vector<Span> decode(std::span<const Tag> tags, Role role = Role::Aspect);

/// Promotes every orphan I (start of sequence or after O) to B. Idempotent;
/// valid sequences pass through unchanged.
std::vector<Tag> repair(std::span<const Tag> tags);

}  // namespace absa::iob2
