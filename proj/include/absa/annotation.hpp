// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace absa {

enum class Role { Aspect, Opinion };

/// Label order doubles as the classifier's output order and its tie-break
/// priority.
enum class Sentiment { Positive = 0, Neutral = 1, Negative = 2, Unknown = 3 };

inline constexpr std::size_t kSentimentLabels = 4;
inline constexpr std::array<Sentiment, kSentimentLabels> kAllSentiments = {
    Sentiment::Positive, Sentiment::Neutral, Sentiment::Negative, Sentiment::Unknown};

std::string_view to_string(Role role);
std::string_view to_string(Sentiment s);
/// Throws DataError on an unknown label.
Sentiment parse_sentiment(std::string_view text);

/// Token interval [start, end) with its role.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  Role role = Role::Aspect;
  std::optional<Sentiment> sentiment;

  std::size_t length() const { return end - start; }
  bool same_extent(const Span& o) const {
    return start == o.start && end == o.end && role == o.role;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

}  // namespace absa
