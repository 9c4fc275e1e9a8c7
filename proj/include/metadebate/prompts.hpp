#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "metadebate/types.hpp"

namespace metadebate {
namespace prompts {

inline std::string choice_lines(const Question& q) {
  std::ostringstream out;
  for (std::size_t i = 0; i < q.choices.size(); ++i) {
    if (i) out << "\n";
    out << q.choices[i].letter << ". " << q.choices[i].text;
  }
  return out.str();
}

inline std::string question_block(const Question& q) {
  return "Question:\n" + q.stem + "\n\nChoices:\n" + choice_lines(q);
}

inline std::string count_word(std::size_t n, bool capitalize) {
  static const char* words[] = {"zero", "one", "two",   "three", "four",  "five",  "six",
                                "seven", "eight", "nine", "ten",  "eleven", "twelve"};
  std::string word = n < 13 ? words[n] : std::to_string(n);
  if (capitalize && !word.empty() && word[0] >= 'a' && word[0] <= 'z')
    word[0] = static_cast<char>(word[0] - 'a' + 'A');
  return word;
}

// "Affirmative, Negative, and Moderator Judge" — serial comma above two items.
inline std::string name_list(const std::vector<std::string>& names) {
  std::ostringstream out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) {
      if (names.size() == 2) out << " and ";
      else out << (i + 1 == names.size() ? ", and " : ", ");
    }
    out << names[i];
  }
  return out.str();
}

inline std::string debater_preamble() {
  return "You are a debater. Hello and welcome to the debate competition. "
         "It’s not necessary to fully agree or disagree with each other’s perspectives, "
         "as our objective is to find the correct answer. The debate topic is to solve a given "
         "question and select the correct answer. Here is the data:";
}

// The uniform proposal template: question and role description inserted,
// nothing else. For the Affirmative this is also the MAD round-1 prompt.
inline std::string proposal_prompt(const Question& q, const RoleSpec& role) {
  return debater_preamble() + "\n\n" + question_block(q) + "\n\n" + role.description;
}

inline std::string score_block_example(const CriteriaSet& criteria, std::size_t agent_count) {
  json example = json::object();
  std::size_t shown = agent_count < 2 ? agent_count : 2;
  for (std::size_t k = 1; k <= shown; ++k) {
    json per = json::object();
    int base = k == 1 ? 4 : 3;
    for (std::size_t c = 0; c < criteria.criteria.size(); ++c)
      per[criteria.criteria[c].name] = base + (static_cast<int>(c) % 2);
    example[std::to_string(k)] = per;
  }
  return example.dump();
}

// Peer-review prompt: all proposals for one role, labeled "Agent k Response"
// in registry order, scored 1-5 per criterion. A machine-readable score block
// is requested at the end; parsing falls back to prose "Score is k" scans.
inline std::string review_prompt(const Question& q, const RoleSpec& role, const RoleSet& roles,
                                 const std::vector<std::string>& proposal_texts,
                                 const CriteriaSet& criteria) {
  std::ostringstream out;
  out << "You are participating in a debate assessment to evaluate agent performance on a given "
         "STEM question. Here is the data:\n\n";
  out << question_block(q) << "\n\n";

  std::vector<std::string> names;
  for (const auto& r : roles.roles()) names.push_back(r.name);
  out << "Context: This is part of a structured debate with " << count_word(roles.size(), false)
      << " roles (" << name_list(names) << ").\n\n";

  out << count_word(proposal_texts.size(), true)
      << (proposal_texts.size() == 1 ? " agent has" : " agents have each")
      << " submitted responses attempting to fulfill the " << role.name << " role.\n\n";

  for (std::size_t k = 0; k < proposal_texts.size(); ++k)
    out << "Agent " << (k + 1) << " Response:\n" << proposal_texts[k] << "\n\n";

  out << "Your Task: Evaluate each agent's suitability for the " << role.name
      << " role based on their submitted responses using the criteria below. You will provide a "
         "1–5 score for each criterion per agent, along with a brief explanation.\n\n";

  out << "Evaluation Criteria:\n\n";
  for (std::size_t c = 0; c < criteria.criteria.size(); ++c)
    out << (c + 1) << ". " << criteria.criteria[c].name << " (1-5) - "
        << criteria.criteria[c].description << "\n\n";

  out << "*Note*: Do not be biased toward agent writing styles (e.g., length, complexity)\n\n";

  out << "Scoring Scale:\n\n"
         "5 = Excellent - Natural fit, strong performance on this criterion\n"
         "4 = Good - Minor room for improvement\n"
         "3 = Adequate - Acceptable but with clear concerns\n"
         "2 = Poor - Significant weaknesses\n"
         "1 = Very Poor - Clearly inadequate performance\n\n";

  out << "After your explanations, output one final line containing only a JSON object that maps "
         "each agent number to its score per criterion, for example:\n"
      << score_block_example(criteria, proposal_texts.size());
  return out.str();
}

inline std::string review_reask_note() {
  return "Your previous reply could not be parsed. Output only the JSON score block in the format "
         "shown above, covering every agent.";
}

// Criteria-drafting prompt. The MAD context paragraph is the fixed drafting
// template; other frameworks get a context generated from their role set.
inline std::string framework_context(const RoleSet& roles) {
  if (roles.framework() == Framework::mad) {
    return "The debate system includes an Affirmative debater to first express viewpoints, a "
           "Negative debater to respond to Affirmative's answer and correct the mistakes. A Judge "
           "to review Affimrative and Negative's arguments, then decides whether the correct "
           "solution can be obtained and choose a side to support.";
  }
  std::ostringstream out;
  out << "The debate system assigns each agent a distinct reasoning method as its role.";
  for (const auto& r : roles.roles()) out << " " << r.name << ": " << r.description;
  return out.str();
}

inline std::string criteria_prompt(const RoleSet& roles, const RoleSpec& role,
                                   const std::string& modality_domain,
                                   const std::vector<Question>& examples) {
  std::ostringstream out;
  out << "Context:\n" << framework_context(roles) << "\n";
  out << "Several agent candidates have played the " << role.name << " role to answer "
      << modality_domain << ". Below are example questions:\n\n";
  for (std::size_t i = 0; i < examples.size(); ++i)
    out << "Question" << (i + 1) << ":\n" << examples[i].stem << "\n"
        << choice_lines(examples[i]) << "\n\n";
  out << "Your Task:\n"
         "Draft 2 or 3 evaluation criteria that can be used to judge which agent gives the best "
         "response being " << role.name << ". Each criterion should be a single word or short "
         "phrase, followed by a brief explanation.\n\n";
  out << "Your criteria should focus on:\n"
         "- If the agent fullfills the " << role.name << " role\n"
         "- Correctness and validity of the agent reasoning rather than presentation styles\n\n";
  out << "The criteria should reflect what distinguishes high-quality, technically correct "
      << role.name << " reasoning from shallow and flawed attempts. The criteria should only "
         "include necessary traits for the goal of answering correctly for " << modality_domain
      << ".\nThe criteria should not mention the given example questions. You should only output "
         "the criteria.";
  return out.str();
}

inline std::string criteria_reask_note() {
  return "Reminder: draft 2 or 3 criteria, do not mention the given example questions, and output "
         "only the criteria.";
}

// ---------------------------------------------------------------------------
// Debate-turn prompts

inline std::string answer_instruction() {
  return "State your final answer as \"Answer: X\" where X is the letter of your chosen option.";
}

inline std::string mad_affirmative_prompt(const Question& q, const RoleSpec& affirmative,
                                          const std::string& latest_negative, int round) {
  if (round <= 1) return proposal_prompt(q, affirmative);
  return debater_preamble() + "\n\n" + question_block(q) + "\n\nThe negative side argued:\n" +
         latest_negative +
         "\n\nYou are affirmative side. Respond to the negative side and defend or revise your "
         "viewpoints.";
}

inline std::string mad_negative_prompt(const Question& q, const RoleSpec& negative,
                                       const std::string& latest_affirmative) {
  return debater_preamble() + "\n\n" + question_block(q) + "\n\nThe affirmative side argued:\n" +
         latest_affirmative + "\n\n" + negative.description;
}

inline std::string mad_judge_prompt(const Question& q, const std::string& latest_affirmative,
                                    const std::string& latest_negative, bool forced) {
  std::ostringstream out;
  out << "You are the moderator of a debate competition. The debate topic is to solve a given "
         "question and select the correct answer. Here is the data:\n\n";
  out << question_block(q) << "\n\n";
  out << "The affirmative side argued:\n" << latest_affirmative << "\n\n";
  out << "The negative side argued:\n" << latest_negative << "\n\n";
  out << "You are the moderator judge. Review both sides and decide whether the correct answer "
         "can be determined.";
  if (forced) {
    out << " You must now decide. Reply with your final answer as \"Answer: X\" where X is the "
           "letter of the correct choice.";
  } else {
    out << " If it can, reply with your final answer as \"Answer: X\" where X is the letter of "
           "the correct choice. If the debate should continue, reply only \"CONTINUE\".";
  }
  return out.str();
}

inline std::string answer_reask_note() {
  return "Your previous reply named no valid choice letter. Reply with only \"Answer: X\" where X "
         "is the letter of your chosen option.";
}

inline std::string dmad_solve_prompt(const Question& q, const RoleSpec& role) {
  return debater_preamble() + "\n\n" + question_block(q) + "\n\n" + role.description + "\n\n" +
         answer_instruction();
}

inline std::string dmad_revise_prompt(const Question& q, const RoleSpec& role,
                                      const std::vector<std::pair<std::string, std::string>>&
                                          solutions_by_role_name) {
  std::ostringstream out;
  out << debater_preamble() << "\n\n" << question_block(q) << "\n\n";
  out << "Here are the current solutions from all debaters:\n\n";
  for (const auto& [name, text] : solutions_by_role_name)
    out << name << " solution:\n" << text << "\n\n";
  out << "Review the other solutions, then provide your revised solution using your prescribed "
         "method. " << role.description << "\n\n" << answer_instruction();
  return out.str();
}

}  // namespace prompts
}  // namespace metadebate
