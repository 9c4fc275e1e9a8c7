#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metadebate/errors.hpp"
#include "metadebate/gateway.hpp"
#include "metadebate/types.hpp"

namespace metadebate {

// A rule fires when every `contains` fragment appears in the request text.
// Three magic responses simulate backend behavior: "<<FAIL>>" raises
// BackendUnavailable, "<<TIMEOUT>>" raises Timeout, "<<EMPTY>>" returns an
// empty completion.
struct ScriptedRule {
  std::vector<std::string> contains;
  std::string response;

  friend bool operator==(const ScriptedRule&, const ScriptedRule&) = default;
};

struct CompetenceEntry {
  std::string role_id;
  std::string question_id;
  bool gives_correct = false;

  friend bool operator==(const CompetenceEntry&, const CompetenceEntry&) = default;
};

struct PlantedAnswers {
  char correct = 'A';
  char wrong = 'B';

  friend bool operator==(const PlantedAnswers&, const PlantedAnswers&) = default;
};

// When set, the agent answers review prompts with a structured score block:
// each "Agent k Response" section is scored by the highest-valued marker it
// contains, or default_score when none matches.
struct ReviewPolicy {
  std::map<std::string, int> marker_scores;
  int default_score = 2;

  friend bool operator==(const ReviewPolicy&, const ReviewPolicy&) = default;
};

// Deterministic stand-in for an LLM agent. Handling order for a request:
//   1. ordered rules, first match wins;
//   2. review prompts, when a review policy is configured;
//   3. competence-table responses, when the prompt names a known role and
//      question (markers below);
//   4. default_response.
struct ScriptedAgentProgram {
  std::string agent_id;
  std::vector<ScriptedRule> rules;
  std::string default_response = "I have nothing to add.";
  std::optional<ReviewPolicy> review_policy;
  std::vector<CompetenceEntry> competence;
  std::map<std::string, std::string> role_markers;      // role id -> fragment in its prompts
  std::map<std::string, std::string> question_markers;  // question id -> fragment in its prompts
  std::map<std::string, PlantedAnswers> question_answers;
  std::string quality_marker;  // stamped on this agent's competent proposals
  std::vector<std::string> judge_roles = {"judge"};
};

inline void to_json(json& j, const ScriptedRule& r) {
  j = json{{"contains", r.contains}, {"response", r.response}};
}
inline void from_json(const json& j, ScriptedRule& r) {
  r.contains = j.value("contains", std::vector<std::string>{});
  r.response = j.value("response", "");
}

inline void to_json(json& j, const CompetenceEntry& e) {
  j = json{{"role_id", e.role_id}, {"question_id", e.question_id}, {"gives_correct", e.gives_correct}};
}
inline void from_json(const json& j, CompetenceEntry& e) {
  e.role_id = j.value("role_id", "");
  e.question_id = j.value("question_id", "");
  e.gives_correct = j.value("gives_correct", false);
}

inline void to_json(json& j, const PlantedAnswers& a) {
  j = json{{"correct", std::string(1, a.correct)}, {"wrong", std::string(1, a.wrong)}};
}
inline void from_json(const json& j, PlantedAnswers& a) {
  std::string c = j.value("correct", "A");
  std::string w = j.value("wrong", "B");
  if (c.size() != 1 || w.size() != 1) throw Error(Errc::ParseError, "planted answers must be single letters");
  a.correct = c[0];
  a.wrong = w[0];
}

inline void to_json(json& j, const ReviewPolicy& p) {
  j = json{{"marker_scores", p.marker_scores}, {"default_score", p.default_score}};
}
inline void from_json(const json& j, ReviewPolicy& p) {
  p.marker_scores = j.value("marker_scores", std::map<std::string, int>{});
  p.default_score = j.value("default_score", 2);
}

inline void to_json(json& j, const ScriptedAgentProgram& p) {
  j = json{{"agent_id", p.agent_id},
           {"rules", p.rules},
           {"default_response", p.default_response},
           {"competence", p.competence},
           {"role_markers", p.role_markers},
           {"question_markers", p.question_markers},
           {"question_answers", p.question_answers},
           {"quality_marker", p.quality_marker},
           {"judge_roles", p.judge_roles}};
  if (p.review_policy) j["review"] = *p.review_policy;
}
inline void from_json(const json& j, ScriptedAgentProgram& p) {
  p.agent_id = j.value("agent_id", "");
  p.rules = j.value("rules", std::vector<ScriptedRule>{});
  p.default_response = j.value("default_response", "I have nothing to add.");
  if (j.contains("review")) p.review_policy = j.at("review").get<ReviewPolicy>();
  else p.review_policy.reset();
  p.competence = j.value("competence", std::vector<CompetenceEntry>{});
  p.role_markers = j.value("role_markers", std::map<std::string, std::string>{});
  p.question_markers = j.value("question_markers", std::map<std::string, std::string>{});
  p.question_answers = j.value("question_answers", std::map<std::string, PlantedAnswers>{});
  p.quality_marker = j.value("quality_marker", "");
  p.judge_roles = j.value("judge_roles", std::vector<std::string>{"judge"});
}

inline ScriptedAgentProgram load_scripted_program(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open scripted program '" + path.string() + "'");
  try {
    return json::parse(in).get<ScriptedAgentProgram>();
  } catch (const json::exception& ex) {
    throw Error(Errc::ParseError, "scripted program '" + path.string() + "': " + ex.what());
  }
}

class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(ScriptedAgentProgram program) : program_(std::move(program)) {}

  const ScriptedAgentProgram& program() const { return program_; }

  ChatResponse invoke(const AgentSpec&, const ChatRequest& request) override {
    std::string text = request_text(request);

    for (const auto& rule : program_.rules) {
      bool matched = true;
      for (const auto& fragment : rule.contains)
        if (text.find(fragment) == std::string::npos) { matched = false; break; }
      if (matched) return respond(rule.response);
    }

    if (program_.review_policy && text.find("Your Task: Evaluate each agent") != std::string::npos)
      return respond(review_response(text));

    if (!program_.competence.empty()) {
      if (auto canned = competence_response(text)) return respond(*canned);
    }

    return respond(program_.default_response);
  }

 private:
  static std::string request_text(const ChatRequest& request) {
    std::ostringstream out;
    for (std::size_t i = 0; i < request.messages.size(); ++i) {
      if (i) out << "\n\n";
      out << request.messages[i].text;
      // Scripted agents see attachments only as textual placeholders.
      for (const auto& a : request.messages[i].attachments)
        out << "\n[attachment: " << a.path << "]";
    }
    return out.str();
  }

  static ChatResponse respond(const std::string& canned) {
    if (canned == "<<FAIL>>") throw Error(Errc::BackendUnavailable, "scripted failure");
    if (canned == "<<TIMEOUT>>") throw Error(Errc::Timeout, "scripted timeout");
    ChatResponse resp;
    if (canned != "<<EMPTY>>") resp.text = canned;
    return resp;
  }

  // Scores each labeled proposal section by the best marker found in it and
  // emits rationale prose plus the machine-readable block.
  std::string review_response(const std::string& text) const {
    const ReviewPolicy& policy = *program_.review_policy;
    std::vector<std::string> criteria = criteria_names(text);
    if (criteria.empty()) criteria.push_back("Overall");

    // Section boundaries: "Agent k Response:" ... next label or "Your Task:".
    std::regex label(R"(Agent (\d{1,2}) Response:)");
    std::vector<std::pair<int, std::size_t>> starts;
    for (std::sregex_iterator it(text.begin(), text.end(), label), end; it != end; ++it)
      starts.emplace_back(std::stoi((*it)[1].str()), static_cast<std::size_t>(it->position()) + it->length());
    std::size_t tail = text.find("Your Task:");
    if (tail == std::string::npos) tail = text.size();

    std::ostringstream prose;
    json block = json::object();
    for (std::size_t s = 0; s < starts.size(); ++s) {
      std::size_t begin = starts[s].second;
      std::size_t end = tail;
      if (s + 1 < starts.size()) {
        end = text.find("Agent " + std::to_string(starts[s + 1].first) + " Response:", begin);
        if (end == std::string::npos || end > tail) end = tail;
      }
      std::string section = text.substr(begin, end - begin);
      int score = policy.default_score;
      for (const auto& [marker, value] : policy.marker_scores)
        if (section.find(marker) != std::string::npos) score = std::max(score, value);
      prose << "Agent " << starts[s].first
            << (score >= 4 ? " fulfills the role convincingly. Score is "
                           : " falls short of the role requirements. Score is ")
            << score << ".\n";
      json per = json::object();
      for (const auto& name : criteria) per[name] = score;
      block[std::to_string(starts[s].first)] = per;
    }
    return prose.str() + block.dump();
  }

  // Criterion names as listed in the review prompt: "1. Name (1-5) - ...".
  static std::vector<std::string> criteria_names(const std::string& text) {
    std::vector<std::string> names;
    std::regex line(R"((\d+)\. ([^\n]+?) \(1-5\) - )");
    for (std::sregex_iterator it(text.begin(), text.end(), line), end; it != end; ++it)
      names.push_back((*it)[2].str());
    return names;
  }

  std::optional<std::string> competence_response(const std::string& text) const {
    std::optional<std::string> role_id;
    for (const auto& [id, marker] : program_.role_markers)
      if (!marker.empty() && text.find(marker) != std::string::npos) { role_id = id; break; }
    std::optional<std::string> question_id;
    for (const auto& [id, marker] : program_.question_markers)
      if (!marker.empty() && text.find(marker) != std::string::npos) { question_id = id; break; }
    if (!role_id || !question_id) return std::nullopt;

    auto answers_it = program_.question_answers.find(*question_id);
    if (answers_it == program_.question_answers.end()) return std::nullopt;
    const PlantedAnswers& answers = answers_it->second;

    bool competent = false;
    for (const auto& entry : program_.competence)
      if (entry.role_id == *role_id && entry.question_id == *question_id) {
        competent = entry.gives_correct;
        break;
      }

    bool is_judge = std::find(program_.judge_roles.begin(), program_.judge_roles.end(), *role_id) !=
                    program_.judge_roles.end();
    // A judging turn (as opposed to a meta-debate proposal for the judge
    // seat) embeds the debated sides.
    bool judging_turn = is_judge && text.find("The affirmative side argued:") != std::string::npos;
    std::ostringstream out;
    if (judging_turn) {
      // A capable judge recognizes a strong argument in the debate; without
      // one (or without the capability) it lands on the planted wrong answer.
      bool marker_seen = false;
      if (program_.review_policy)
        for (const auto& [marker, value] : program_.review_policy->marker_scores)
          if (value >= 4 && text.find(marker) != std::string::npos) { marker_seen = true; break; }
      if (competent && marker_seen)
        out << "The debate surfaced a decisive argument. Answer: " << answers.correct;
      else if (competent)
        out << "Neither side presented a decisive argument. Answer: " << answers.wrong;
      else
        out << "As judge, I will conclude. Answer: " << answers.wrong;
    } else if (competent) {
      out << "Taking the " << *role_id << " position: " << program_.quality_marker
          << ". The evidence supports option " << answers.correct << ". Answer: " << answers.correct;
    } else {
      out << "Taking the " << *role_id << " position: I am not fully certain. I will go with option "
          << answers.wrong << ". Answer: " << answers.wrong;
    }
    return out.str();
  }

  ScriptedAgentProgram program_;
};

}  // namespace metadebate
