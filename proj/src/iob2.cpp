// SPDX-License-Identifier: Apache-2.0
#include "absa/iob2.hpp"

#include <algorithm>
#include <sstream>

#include "absa/errors.hpp"

namespace absa {

std::string_view to_string(Role role) { return role == Role::Aspect ? "aspect" : "opinion"; }

std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return "positive";
    case Sentiment::Neutral: return "neutral";
    case Sentiment::Negative: return "negative";
    case Sentiment::Unknown: return "unknown";
  }
  return "unknown";
}

Sentiment parse_sentiment(std::string_view text) {
  for (Sentiment s : kAllSentiments) {
    if (to_string(s) == text) return s;
  }
  throw DataError("unknown sentiment label '" + std::string(text) + "'");
}

namespace iob2 {

char to_char(Tag t) {
  switch (t) {
    case Tag::I: return 'I';
    case Tag::O: return 'O';
    case Tag::B: return 'B';
  }
  return 'O';
}

std::string to_string(std::span<const Tag> tags) {
  std::string out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) out += ' ';
    out += to_char(tags[i]);
  }
  return out;
}

std::vector<Tag> parse(std::string_view text) {
  std::vector<Tag> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "I") out.push_back(Tag::I);
    else if (tok == "O") out.push_back(Tag::O);
    else if (tok == "B") out.push_back(Tag::B);
    else throw DataError("not an IOB2 tag: '" + tok + "'");
  }
  return out;
}

std::vector<Tag> encode(std::span<const Span> spans, std::size_t length) {
  std::vector<Tag> tags(length, Tag::O);
  std::vector<bool> used(length, false);
  for (const Span& s : spans) {
    if (s.start >= s.end || s.end > length) {
      throw DataError("span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                      ") out of range for length " + std::to_string(length));
    }
    for (std::size_t i = s.start; i < s.end; ++i) {
      if (used[i]) {
        throw DataError("overlapping spans at token " + std::to_string(i));
      }
      used[i] = true;
      tags[i] = i == s.start ? Tag::B : Tag::I;
    }
  }
  return tags;
}

bool is_valid(std::span<const Tag> tags) {
  Tag prev = Tag::O;
  for (Tag t : tags) {
    if (t == Tag::I && prev == Tag::O) return false;
    prev = t;
  }
  return true;
}

std::vector<Span> decode(std::span<const Tag> tags, Role role) {
  std::vector<Span> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    switch (tags[i]) {
      case Tag::B:
        spans.push_back({i, i + 1, role, std::nullopt});
        break;
      case Tag::I:
        if (spans.empty() || spans.back().end != i) {
          throw DataError("invalid IOB2 sequence: orphan I at position " + std::to_string(i));
        }
        spans.back().end = i + 1;
        break;
      case Tag::O:
        break;
    }
  }
  return spans;
}

std::vector<Tag> repair(std::span<const Tag> tags) {
  std::vector<Tag> out(tags.begin(), tags.end());
  Tag prev = Tag::O;
  for (Tag& t : out) {
    if (t == Tag::I && prev == Tag::O) t = Tag::B;
    prev = t;
  }
  return out;
}

}  // namespace iob2
}  // namespace absa
