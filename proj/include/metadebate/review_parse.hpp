#pragma once

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "metadebate/types.hpp"

namespace metadebate {

// Per-criterion scores keyed by agent number (1..m) as presented in the
// review prompt.
using IndexedScores = std::map<int, std::map<std::string, int>>;

namespace detail {

// Spans of balanced top-level {...} blocks, string-literal aware.
inline std::vector<std::pair<std::size_t, std::size_t>> brace_spans(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"' && depth > 0) {
      in_string = true;
    } else if (c == '{') {
      if (depth == 0) start = i;
      ++depth;
    } else if (c == '}') {
      if (depth > 0 && --depth == 0) spans.emplace_back(start, i + 1);
    }
  }
  return spans;
}

inline std::optional<IndexedScores> scores_from_json(const json& block, std::size_t agent_count,
                                                     const std::vector<std::string>& criteria_names) {
  if (!block.is_object()) return std::nullopt;
  IndexedScores scores;
  for (const auto& [key, value] : block.items()) {
    int index = 0;
    try {
      index = std::stoi(key);
    } catch (...) {
      return std::nullopt;
    }
    if (index < 1 || static_cast<std::size_t>(index) > agent_count) return std::nullopt;
    if (!value.is_object() || value.empty()) return std::nullopt;
    std::map<std::string, int> per;
    for (const auto& [criterion, raw] : value.items()) {
      if (!raw.is_number_integer()) return std::nullopt;
      int score = raw.get<int>();
      if (score < 1 || score > 5) return std::nullopt;
      per[criterion] = score;
    }
    // The block must score exactly the criteria it was asked about.
    if (per.size() != criteria_names.size()) return std::nullopt;
    for (const auto& name : criteria_names)
      if (!per.count(name)) return std::nullopt;
    scores[index] = std::move(per);
  }
  if (scores.size() != agent_count) return std::nullopt;
  return scores;
}

}  // namespace detail

// Structured pass: the last balanced JSON object in the text that maps every
// agent number 1..m to integer scores in [1,5] for exactly the asked criteria.
inline std::optional<IndexedScores> parse_structured_scores(
    const std::string& text, std::size_t agent_count,
    const std::vector<std::string>& criteria_names) {
  auto spans = detail::brace_spans(text);
  for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
    json block = json::parse(text.substr(it->first, it->second - it->first), nullptr,
                             /*allow_exceptions=*/false);
    if (block.is_discarded()) continue;
    if (auto scores = detail::scores_from_json(block, agent_count, criteria_names)) return scores;
  }
  return std::nullopt;
}

// Prose pass: split the reply into "Agent k ..." sections and take the last
// "Score is k" / "Score: k" in each. Yields a single overall score per agent.
inline std::optional<IndexedScores> parse_prose_scores(const std::string& text,
                                                       std::size_t agent_count) {
  static const std::regex agent_token(R"(Agent\s+(\d{1,2}))");
  static const std::regex score_token(R"([Ss]core\s+(?:is\s+)?([0-9]+)|[Ss]core\s*:\s*([0-9]+))");

  std::vector<std::pair<int, std::size_t>> sections;  // (agent index, section start)
  for (std::sregex_iterator it(text.begin(), text.end(), agent_token), end; it != end; ++it)
    sections.emplace_back(std::stoi((*it)[1].str()), static_cast<std::size_t>(it->position()));
  if (sections.empty()) return std::nullopt;

  IndexedScores scores;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    std::size_t begin = sections[s].second;
    std::size_t end = s + 1 < sections.size() ? sections[s + 1].second : text.size();
    std::string section = text.substr(begin, end - begin);
    std::optional<int> last;
    for (std::sregex_iterator it(section.begin(), section.end(), score_token), stop; it != stop; ++it) {
      std::string digits = (*it)[1].matched ? (*it)[1].str() : (*it)[2].str();
      try {
        last = std::stoi(digits);
      } catch (...) {
        return std::nullopt;
      }
    }
    if (!last) continue;              // a mention without a score: tolerated
    if (*last < 1 || *last > 5) return std::nullopt;  // out-of-scale is malformed, not clamped
    scores[sections[s].first] = {{"Overall", *last}};  // later sections override earlier ones
  }

  if (scores.size() != agent_count) return std::nullopt;
  for (std::size_t k = 1; k <= agent_count; ++k)
    if (!scores.count(static_cast<int>(k))) return std::nullopt;
  return scores;
}

// Full parse policy for one review reply. Structured block wins over prose;
// no recognizable scores means the attempt failed (caller re-asks/excludes).
inline std::optional<IndexedScores> parse_review_scores(
    const std::string& text, std::size_t agent_count,
    const std::vector<std::string>& criteria_names) {
  if (auto structured = parse_structured_scores(text, agent_count, criteria_names))
    return structured;
  return parse_prose_scores(text, agent_count);
}

}  // namespace metadebate
