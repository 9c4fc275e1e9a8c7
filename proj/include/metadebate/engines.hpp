#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "metadebate/errors.hpp"
#include "metadebate/gateway.hpp"
#include "metadebate/prompts.hpp"
#include "metadebate/types.hpp"

namespace metadebate {

struct EngineConfig {
  Framework framework = Framework::mad;
  int max_rounds = 3;
  bool early_stop = true;

  static EngineConfig defaults(Framework framework) {
    EngineConfig config;
    config.framework = framework;
    config.max_rounds = framework == Framework::mad ? 3 : 2;
    return config;
  }

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

inline void to_json(json& j, const EngineConfig& c) {
  j = json{{"framework", to_string(c.framework)},
           {"max_rounds", c.max_rounds},
           {"early_stop", c.early_stop}};
}
inline void from_json(const json& j, EngineConfig& c) {
  c.framework = framework_from_string(j.value("framework", "mad"));
  c.max_rounds = j.value("max_rounds", 3);
  c.early_stop = j.value("early_stop", true);
}

// ---------------------------------------------------------------------------
// Role catalogs

inline RoleSet mad_role_set() {
  return validate_role_set({
      RoleSpec{"affirmative", Framework::mad, "Affirmative",
               "You are affirmative side. Please express your viewpoints.", 0},
      RoleSpec{"negative", Framework::mad, "Negative",
               "You are negative side. You disagree with the affirmative side. Please express "
               "your viewpoints.",
               0},
      RoleSpec{"judge", Framework::mad, "Moderator Judge",
               "You are the moderator judge. Review both sides and decide which answer is correct.",
               0},
  });
}

inline RoleSet dmad_text_role_set() {
  return validate_role_set({
      RoleSpec{"cot", Framework::dmad, "CoT",
               "Solve the question step by step, reasoning through each intermediate conclusion "
               "before stating your final answer.",
               0},
      RoleSpec{"sbp", Framework::dmad, "SBP",
               "First step back and state the general principle behind the question, then apply "
               "that principle to reach your answer.",
               0},
      RoleSpec{"pot", Framework::dmad, "PoT",
               "Write a short program-style derivation whose steps compute the answer, then state "
               "the result it produces.",
               0},
  });
}

inline RoleSet dmad_vision_role_set() {
  return validate_role_set({
      RoleSpec{"io", Framework::dmad, "IO",
               "Answer the question directly from the given input without intermediate steps.", 0},
      RoleSpec{"ccot", Framework::dmad, "CCoT",
               "Describe the composition of the scene first, then reason over that description to "
               "reach your answer.",
               0},
      RoleSpec{"ddcot", Framework::dmad, "DDCoT",
               "Split the problem into perception duties and reasoning duties, answer each duty, "
               "then combine them into your final answer.",
               0},
  });
}

struct RoleCatalog {
  RoleSet mad_roles = mad_role_set();
  RoleSet dmad_text_roles = dmad_text_role_set();
  RoleSet dmad_vision_roles = dmad_vision_role_set();

  const RoleSet& select(Framework framework, bool has_images) const {
    if (framework == Framework::mad) return mad_roles;
    return has_images ? dmad_vision_roles : dmad_text_roles;
  }
};

// ---------------------------------------------------------------------------
// Answer extraction

// Scans for "Answer: X", "answer is (X)", and a standalone trailing letter;
// the last match naming a valid choice letter wins.
inline std::optional<char> extract_answer(const std::string& text, const std::string& letters) {
  static const std::regex pattern(
      R"([Aa]nswer(?:\s+is)?\s*:?\s*\(?([A-Za-z])\)?(?![A-Za-z0-9]))");

  std::optional<char> best;
  std::size_t best_pos = 0;
  for (std::sregex_iterator it(text.begin(), text.end(), pattern), end; it != end; ++it) {
    char letter = static_cast<char>(std::toupper(static_cast<unsigned char>((*it)[1].str()[0])));
    if (letters.find(letter) == std::string::npos) continue;
    std::size_t pos = static_cast<std::size_t>(it->position());
    if (!best || pos >= best_pos) {
      best = letter;
      best_pos = pos;
    }
  }

  // Standalone trailing letter, e.g. a reply ending in "(C)" or "C."
  std::size_t end = text.find_last_not_of(" \t\r\n");
  if (end != std::string::npos) {
    std::size_t start = end;
    while (start > 0 && !std::isspace(static_cast<unsigned char>(text[start - 1]))) --start;
    std::string token = text.substr(start, end - start + 1);
    while (!token.empty() && (token.back() == '.' || token.back() == ')' || token.back() == '*' ||
                              token.back() == ':'))
      token.pop_back();
    while (!token.empty() && (token.front() == '(' || token.front() == '*')) token.erase(0, 1);
    if (token.size() == 1 && std::isalpha(static_cast<unsigned char>(token[0]))) {
      char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(token[0])));
      if (letters.find(letter) != std::string::npos && (!best || start >= best_pos)) best = letter;
    }
  }
  return best;
}

namespace detail {

inline std::string completion_text(Gateway& gateway, const AgentSpec& agent,
                                   const std::string& prompt,
                                   const std::vector<Attachment>& attachments) {
  ChatRequest request = make_user_request(agent.id, prompt, agent.params, attachments);
  return gateway.complete(request).text;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// MAD: Affirmative expresses viewpoints, Negative refutes, the Moderator
// Judge reviews both sides each round and either settles on an answer or asks
// for another round; at max_rounds the judge must decide.

inline Transcript run_mad(const Question& question, const RoleSet& roles,
                          const Assignment& assignment, Gateway& gateway,
                          const EngineConfig& config) {
  if (config.max_rounds < 1) throw Error(Errc::InvalidSpec, "max_rounds must be >= 1");
  const RoleSpec& affirmative = roles.at("affirmative");
  const RoleSpec& negative = roles.at("negative");
  roles.at("judge");

  const AgentSpec& aff_agent = gateway.registry().at(assignment.agent_for("affirmative"));
  const AgentSpec& neg_agent = gateway.registry().at(assignment.agent_for("negative"));
  const AgentSpec& judge_agent = gateway.registry().at(assignment.agent_for("judge"));

  Transcript transcript;
  transcript.question_id = question.id;
  transcript.framework = Framework::mad;

  std::string letters = question.letters();
  std::string latest_affirmative;
  std::string latest_negative;
  std::optional<char> final_answer;
  bool early = false;

  for (int round = 1; round <= config.max_rounds; ++round) {
    latest_affirmative = detail::completion_text(
        gateway, aff_agent, prompts::mad_affirmative_prompt(question, affirmative, latest_negative, round),
        question.attachments);
    transcript.turns.push_back(Turn{round, "affirmative", aff_agent.id, latest_affirmative});

    latest_negative = detail::completion_text(
        gateway, neg_agent, prompts::mad_negative_prompt(question, negative, latest_affirmative),
        question.attachments);
    transcript.turns.push_back(Turn{round, "negative", neg_agent.id, latest_negative});

    const bool forced = round == config.max_rounds;
    if (!forced && !config.early_stop) continue;  // judge only speaks at the end

    std::string judge_prompt =
        prompts::mad_judge_prompt(question, latest_affirmative, latest_negative, forced);
    std::string judge_text =
        detail::completion_text(gateway, judge_agent, judge_prompt, question.attachments);
    transcript.turns.push_back(Turn{round, "judge", judge_agent.id, judge_text});

    std::optional<char> answer = extract_answer(judge_text, letters);
    if (!answer && forced) {
      // One re-ask on the forced decision turn.
      ChatRequest reask = make_user_request(judge_agent.id, judge_prompt, judge_agent.params,
                                            question.attachments);
      reask.messages.push_back(ChatMessage{ChatRole::user, prompts::answer_reask_note(), {}});
      judge_text = gateway.complete(reask).text;
      transcript.turns.push_back(Turn{round, "judge", judge_agent.id, judge_text});
      answer = extract_answer(judge_text, letters);
      if (!answer)
        throw Error(Errc::AnswerExtractionFailure,
                    "judge produced no parseable answer for question '" + question.id + "'");
    }
    if (answer) {
      final_answer = answer;
      early = !forced;
      break;
    }
    // No parseable answer mid-debate means another round.
  }

  transcript.verdict = make_verdict(final_answer, question.gold_answer, early);
  return transcript;
}

// ---------------------------------------------------------------------------
// DMAD: each reasoning-method role solves independently in round 1, then sees
// all current solutions and revises; stops early on unanimity. The final
// answer is the majority over the last round, ties going to the ordinal-1
// role's answer.

inline Transcript run_dmad(const Question& question, const RoleSet& roles,
                           const Assignment& assignment, Gateway& gateway,
                           const EngineConfig& config) {
  if (config.max_rounds < 1) throw Error(Errc::InvalidSpec, "max_rounds must be >= 1");

  Transcript transcript;
  transcript.question_id = question.id;
  transcript.framework = Framework::dmad;

  std::string letters = question.letters();
  std::vector<std::string> solutions(roles.size());
  std::vector<char> answers(roles.size(), '?');
  bool early = false;

  for (int round = 1; round <= config.max_rounds; ++round) {
    std::vector<std::pair<std::string, std::string>> previous;
    if (round > 1)
      for (std::size_t r = 0; r < roles.size(); ++r)
        previous.emplace_back(roles.roles()[r].name, solutions[r]);

    for (std::size_t r = 0; r < roles.size(); ++r) {
      const RoleSpec& role = roles.roles()[r];
      const AgentSpec& agent = gateway.registry().at(assignment.agent_for(role.id));
      std::string prompt = round == 1 ? prompts::dmad_solve_prompt(question, role)
                                      : prompts::dmad_revise_prompt(question, role, previous);
      std::string text = detail::completion_text(gateway, agent, prompt, question.attachments);
      transcript.turns.push_back(Turn{round, role.id, agent.id, text});

      std::optional<char> answer = extract_answer(text, letters);
      if (!answer) {
        ChatRequest reask = make_user_request(agent.id, prompt, agent.params, question.attachments);
        reask.messages.push_back(ChatMessage{ChatRole::user, prompts::answer_reask_note(), {}});
        text = gateway.complete(reask).text;
        transcript.turns.push_back(Turn{round, role.id, agent.id, text});
        answer = extract_answer(text, letters);
        if (!answer)
          throw Error(Errc::AnswerExtractionFailure, "role '" + role.id +
                                                         "' produced no parseable answer for "
                                                         "question '" + question.id + "'");
      }
      solutions[r] = text;
      answers[r] = *answer;
    }

    bool unanimous = std::all_of(answers.begin(), answers.end(),
                                 [&](char a) { return a == answers.front(); });
    if (unanimous && config.early_stop && round < config.max_rounds) {
      early = true;
      break;
    }
    if (unanimous) break;
  }

  // Majority vote over the last round; ties go to the ordinal-1 role.
  std::map<char, int> tally;
  for (char a : answers) ++tally[a];
  char winner = answers.front();
  int best = 0;
  bool unique = true;
  for (const auto& [letter, count] : tally) {
    if (count > best) {
      best = count;
      winner = letter;
      unique = true;
    } else if (count == best) {
      unique = false;
    }
  }
  if (!unique) winner = answers.front();

  transcript.verdict = make_verdict(winner, question.gold_answer, early);
  return transcript;
}

inline Transcript run_debate(const Question& question, const RoleSet& roles,
                             const Assignment& assignment, Gateway& gateway,
                             const EngineConfig& config) {
  validate_assignment(assignment, roles, gateway.registry());
  return config.framework == Framework::mad ? run_mad(question, roles, assignment, gateway, config)
                                            : run_dmad(question, roles, assignment, gateway, config);
}

}  // namespace metadebate
