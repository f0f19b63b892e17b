// SPDX-License-Identifier: Apache-2.0
#include "absa/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "absa/errors.hpp"

namespace absa {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_spans(const std::vector<Span>& spans, Role role, std::size_t length) {
  std::vector<const Span*> sorted;
  for (const Span& s : spans) {
    if (s.role != role) throw DataError("span listed under the wrong role");
    if (s.start >= s.end || s.end > length) {
      throw DataError(std::string(to_string(role)) + " span [" + std::to_string(s.start) + "," +
                      std::to_string(s.end) + ") out of range for " + std::to_string(length) +
                      " tokens");
    }
    sorted.push_back(&s);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Span* a, const Span* b) { return a->start < b->start; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->start < sorted[i - 1]->end) {
      throw DataError("overlapping " + std::string(to_string(role)) + " spans at token " +
                      std::to_string(sorted[i]->start));
    }
  }
}

bool is_number(const std::string& t) {
  bool digit = false;
  for (char c : t) {
    if (std::isdigit(static_cast<unsigned char>(c))) digit = true;
    else if (c != '.' && c != ',' && c != '-') return false;
  }
  return digit;
}

Span parse_span(const json& j, Role role) {
  if (!j.is_object()) throw DataError("span must be an object");
  const auto start = j.at("start").get<long long>();
  const auto end = j.at("end").get<long long>();
  if (start < 0 || end < 0) throw DataError("negative span offset");
  Span s{static_cast<std::size_t>(start), static_cast<std::size_t>(end), role, std::nullopt};
  if (auto it = j.find("sentiment"); it != j.end() && !it->is_null()) {
    s.sentiment = parse_sentiment(it->get<std::string>());
  }
  return s;
}

ordered_json span_json(const Span& s) {
  ordered_json j;
  j["start"] = s.start;
  j["end"] = s.end;
  if (s.sentiment) j["sentiment"] = std::string(to_string(*s.sentiment));
  return j;
}

Review parse_review(const std::string& line) {
  const json j = json::parse(line);
  if (!j.is_object()) throw DataError("line is not a JSON object");
  Review r;
  r.id = j.at("id").get<std::string>();
  r.tokens = j.at("tokens").get<std::vector<std::string>>();
  if (auto it = j.find("pos"); it != j.end()) {
    r.pos = it->get<std::vector<std::string>>();
  } else {
    r.pos = fallback_pos_tags(r.tokens);
  }
  if (auto it = j.find("aspects"); it != j.end()) {
    for (const auto& s : *it) r.aspects.push_back(parse_span(s, Role::Aspect));
  }
  if (auto it = j.find("opinions"); it != j.end()) {
    for (const auto& s : *it) r.opinions.push_back(parse_span(s, Role::Opinion));
  }
  if (auto it = j.find("relations"); it != j.end()) {
    for (const auto& p : *it) {
      if (!p.is_array() || p.size() != 2) throw DataError("relation must be [aspect, opinion]");
      const auto a = p[0].get<long long>();
      const auto o = p[1].get<long long>();
      if (a < 0 || o < 0) throw DataError("negative relation index");
      r.relations.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(o));
    }
  }
  return r;
}

}  // namespace

void Review::validate() const {
  if (pos.size() != tokens.size()) {
    throw DataError("review '" + id + "': " + std::to_string(pos.size()) + " POS tags for " +
                    std::to_string(tokens.size()) + " tokens");
  }
  try {
    check_spans(aspects, Role::Aspect, tokens.size());
    check_spans(opinions, Role::Opinion, tokens.size());
  } catch (const DataError& e) {
    throw DataError("review '" + id + "': " + e.what());
  }
  for (const auto& [a, o] : relations) {
    if (a >= aspects.size() || o >= opinions.size()) {
      throw DataError("review '" + id + "': relation [" + std::to_string(a) + "," +
                      std::to_string(o) + "] references a missing span");
    }
  }
}

std::vector<std::string> fallback_pos_tags(const std::vector<std::string>& tokens) {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t == "." || t == "!" || t == "?") tags.emplace_back(".");
    else if (t == "," || t == ":" || t == ";") tags.emplace_back(t == "," ? "," : ":");
    else if (t == "(" || t == ")" || t == "$" || t == "#") tags.emplace_back(t);
    else if (is_number(t)) tags.emplace_back("CD");
    else tags.emplace_back("NN");
  }
  return tags;
}

Corpus read_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    try {
      Review r = parse_review(line);
      r.validate();
      corpus.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError("corpus line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return read_corpus(in);
}

std::string review_to_json_line(const Review& r) {
  ordered_json j;
  j["id"] = r.id;
  j["tokens"] = r.tokens;
  j["pos"] = r.pos;
  j["aspects"] = ordered_json::array();
  for (const Span& s : r.aspects) j["aspects"].push_back(span_json(s));
  j["opinions"] = ordered_json::array();
  for (const Span& s : r.opinions) j["opinions"].push_back(span_json(s));
  j["relations"] = ordered_json::array();
  for (const auto& [a, o] : r.relations) j["relations"].push_back({a, o});
  return j.dump();
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const Review& r : corpus) out << review_to_json_line(r) << '\n';
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file " + path.string());
  write_corpus(out, corpus);
}

}  // namespace absa
