#pragma once

// Fixture corpus of evaluator replies for the review-score parser: structured
// blocks, prose scoring, mixed replies, and malformed output that must lead
// to exclusion rather than invented scores. Shared by the parser unit tests
// and the acceptance suite.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metadebate/review_parse.hpp"

namespace testutil {

struct ReviewFixture {
  std::string name;
  std::string text;
  std::size_t agent_count;
  std::optional<metadebate::IndexedScores> expected;  // nullopt: attempt must fail
};

inline std::vector<ReviewFixture> review_fixture_corpus() {
  using Scores = metadebate::IndexedScores;
  std::vector<ReviewFixture> corpus;

  corpus.push_back({"clean structured block",
                    R"({"1": {"Accuracy": 4, "Technical Depth": 5}, "2": {"Accuracy": 2, "Technical Depth": 3}})",
                    2,
                    Scores{{1, {{"Accuracy", 4}, {"Technical Depth", 5}}},
                           {2, {{"Accuracy", 2}, {"Technical Depth", 3}}}}});

  corpus.push_back({"prose preamble then block",
                    "Agent 1 reasons carefully; agent 2 drifts off topic.\n"
                    R"({"1": {"Accuracy": 5, "Technical Depth": 4}, "2": {"Accuracy": 2, "Technical Depth": 2}})",
                    2,
                    Scores{{1, {{"Accuracy", 5}, {"Technical Depth", 4}}},
                           {2, {{"Accuracy", 2}, {"Technical Depth", 2}}}}});

  corpus.push_back({"block then trailing prose",
                    R"({"1": {"Accuracy": 3, "Technical Depth": 3}, "2": {"Accuracy": 4, "Technical Depth": 4}})"
                    "\nOverall agent 2 fits the role better.",
                    2,
                    Scores{{1, {{"Accuracy", 3}, {"Technical Depth", 3}}},
                           {2, {{"Accuracy", 4}, {"Technical Depth", 4}}}}});

  // Prose in the shape the evaluators actually produce.
  corpus.push_back({"prose 'Score is k' per agent",
                    "Agent 1 demonstrated an adequate ability to interpret the diagram but made an "
                    "error in identifying the direction. Score is 3.\n"
                    "Agent 2 provides precise geometric visualization with a clear explanation. "
                    "Score is 5.",
                    2,
                    Scores{{1, {{"Overall", 3}}}, {2, {{"Overall", 5}}}}});

  corpus.push_back({"prose 'Score: k' variant",
                    "Agent 1 stays on topic. Score: 4\nAgent 2 simply follows the affirmative and "
                    "fails to serve as Negative side. Score: 2",
                    2,
                    Scores{{1, {{"Overall", 4}}}, {2, {{"Overall", 2}}}}});

  corpus.push_back({"mixed prose and block, block wins",
                    "Agent 1 is weak. Score is 1.\nAgent 2 is strong. Score is 5.\nFinal scores:\n"
                    R"({"1": {"Accuracy": 2, "Technical Depth": 2}, "2": {"Accuracy": 5, "Technical Depth": 4}})",
                    2,
                    Scores{{1, {{"Accuracy", 2}, {"Technical Depth", 2}}},
                           {2, {{"Accuracy", 5}, {"Technical Depth", 4}}}}});

  corpus.push_back({"later sections override earlier prose",
                    "Agent 1 first impression. Score is 2.\nAgent 2 looks fine. Score is 4.\n"
                    "Agent 1 on reflection deserves more credit. Score is 4.",
                    2,
                    Scores{{1, {{"Overall", 4}}}, {2, {{"Overall", 4}}}}});

  corpus.push_back({"block missing an agent, no prose",
                    R"({"1": {"Accuracy": 4, "Technical Depth": 4}})", 2, std::nullopt});

  corpus.push_back({"score out of scale",
                    R"({"1": {"Accuracy": 7, "Technical Depth": 4}, "2": {"Accuracy": 3, "Technical Depth": 3}})",
                    2, std::nullopt});

  corpus.push_back({"prose score out of scale",
                    "Agent 1 is beyond excellent. Score is 9.\nAgent 2 is fine. Score is 4.", 2,
                    std::nullopt});

  corpus.push_back({"prose score zero",
                    "Agent 1 contributed nothing. Score is 0.\nAgent 2 is fine. Score is 4.", 2,
                    std::nullopt});

  corpus.push_back({"no recognizable scores",
                    "Both agents engaged with the question thoughtfully and I enjoyed reading "
                    "their responses.",
                    2, std::nullopt});

  corpus.push_back({"empty reply", "", 2, std::nullopt});

  corpus.push_back({"non-integer scores",
                    R"({"1": {"Accuracy": 4.5, "Technical Depth": 4}, "2": {"Accuracy": 3, "Technical Depth": 3}})",
                    2, std::nullopt});

  corpus.push_back({"prose covering only some agents",
                    "Agent 1 argues well. Score is 4.\nAgent 3 was not shown here.", 3,
                    std::nullopt});

  corpus.push_back({"named keys fall back to prose",
                    R"({"alice": {"Accuracy": 5, "Technical Depth": 5}})"
                    "\nAgent 1 matches the role. Score is 5.\nAgent 2 does not. Score is 2.",
                    2,
                    Scores{{1, {{"Overall", 5}}}, {2, {{"Overall", 2}}}}});

  corpus.push_back({"last valid block wins over stray braces",
                    "Sketch: {not json}\n"
                    R"({"1": {"Accuracy": 4, "Technical Depth": 3}, "2": {"Accuracy": 2, "Technical Depth": 2}})"
                    "\nPS {also: not json",
                    2,
                    Scores{{1, {{"Accuracy", 4}, {"Technical Depth", 3}}},
                           {2, {{"Accuracy", 2}, {"Technical Depth", 2}}}}});

  corpus.push_back({"extra criterion key rejected, prose saves it",
                    R"({"1": {"Accuracy": 4, "Style": 5}, "2": {"Accuracy": 3, "Style": 3}})"
                    "\nAgent 1 reasons well. Score is 4. Agent 2 less so. Score is 3.",
                    2,
                    Scores{{1, {{"Overall", 4}}}, {2, {{"Overall", 3}}}}});

  return corpus;
}

}  // namespace testutil
