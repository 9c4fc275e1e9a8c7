#pragma once

// Shared fixtures for the test suites: temp directories, small scripted
// agents, and the planted-specialist MAD world used by the meta-debate,
// strategy, harness, and acceptance tests.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "metadebate/metadebate.hpp"

namespace testutil {

namespace md = metadebate;
namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "metadebate") {
    std::string pattern = (fs::temp_directory_path() / (tag + ".XXXXXX")).string();
    std::vector<char> buffer(pattern.begin(), pattern.end());
    buffer.push_back('\0');
    if (!mkdtemp(buffer.data())) throw std::runtime_error("mkdtemp failed");
    path_ = buffer.data();
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline md::AgentSpec scripted_agent(const std::string& id) {
  md::AgentSpec agent;
  agent.id = id;
  agent.backend = md::BackendKind::scripted;
  return agent;
}

// A question whose stem carries "[id]" so scripted programs can recognize it.
inline md::Question make_question(const std::string& id, int n_choices, char gold,
                                  const std::string& topic = "which option is verified") {
  md::Question q;
  q.id = id;
  q.stem = "[" + id + "] In this trial, " + topic + "?";
  for (int i = 0; i < n_choices; ++i)
    q.choices.push_back(md::Choice{static_cast<char>('A' + i),
                                   "outcome " + std::to_string(i + 1)});
  q.gold_answer = gold;
  return md::validate_question(std::move(q));
}

// -----------------------------------------------------------------------
// Planted-specialist MAD world: three scripted agents, each competent for
// exactly one role on every question. Proposals from the specialist carry
// that agent's quality marker; truthful reviewers score marked sections 5
// and everything else 2. A debate therefore ends correctly iff the judge
// seat holds the judge specialist and at least one of the other seats holds
// its own specialist.

struct SpecialistWorld {
  std::vector<md::Question> questions;
  md::AgentRegistry registry;
  md::RoleSet roles;
  std::map<std::string, md::ScriptedAgentProgram> programs;
  std::map<std::string, md::CriteriaSet> criteria;
  std::map<std::string, std::string> planted;  // role id -> agent id

  bool debate_wins(const md::Assignment& assignment) const {
    return assignment.mapping.at("judge") == planted.at("judge") &&
           (assignment.mapping.at("affirmative") == planted.at("affirmative") ||
            assignment.mapping.at("negative") == planted.at("negative"));
  }
};

inline SpecialistWorld make_specialist_world(int n_questions) {
  SpecialistWorld world;
  world.roles = md::mad_role_set();
  world.planted = {{"affirmative", "a1"}, {"negative", "a2"}, {"judge", "a3"}};

  for (int i = 0; i < n_questions; ++i) {
    std::string id = "q" + std::to_string(100 + i);
    char gold = static_cast<char>('A' + (i * 7 + 3) % 4);
    world.questions.push_back(make_question(id, 4, gold));
  }

  world.registry = md::validate_registry(
      {scripted_agent("a1"), scripted_agent("a2"), scripted_agent("a3")});

  const std::map<std::string, std::string> markers = {
      {"a1", "careful derivation"}, {"a2", "rigorous critique"}, {"a3", "decisive weighing"}};
  const std::map<std::string, std::string> specialist_role = {
      {"a1", "affirmative"}, {"a2", "negative"}, {"a3", "judge"}};

  md::ReviewPolicy policy;
  for (const auto& [_, marker] : markers) policy.marker_scores[marker] = 5;
  policy.default_score = 2;

  for (const auto& agent : world.registry.agents()) {
    md::ScriptedAgentProgram program;
    program.agent_id = agent.id;
    program.quality_marker = markers.at(agent.id);
    program.review_policy = policy;
    program.role_markers = {{"affirmative", "You are affirmative side"},
                            {"negative", "You are negative side"},
                            {"judge", "You are the moderator judge"}};
    for (const auto& question : world.questions) {
      program.question_markers[question.id] = "[" + question.id + "]";
      char gold = *question.gold_answer;
      md::PlantedAnswers answers;
      answers.correct = gold;
      answers.wrong = static_cast<char>('A' + (gold - 'A' + 1) % 4);
      program.question_answers[question.id] = answers;
      program.competence.push_back(
          md::CompetenceEntry{specialist_role.at(agent.id), question.id, true});
    }
    world.programs[agent.id] = std::move(program);
  }

  for (const auto& role : world.roles.roles())
    world.criteria[role.id] = md::builtin_criteria(md::Framework::mad, role.id);
  return world;
}

inline std::unique_ptr<md::Gateway> world_gateway(const SpecialistWorld& world,
                                                  md::GatewayConfig config = {}) {
  auto gateway = std::make_unique<md::Gateway>(world.registry, config);
  for (const auto& [id, program] : world.programs)
    gateway->set_backend(id, std::make_shared<md::ScriptedBackend>(program));
  return gateway;
}

// Writes the world as CLI-consumable fixtures: agents.json, one program file
// per agent, and dataset.jsonl. Returns the agents.json path.
inline fs::path write_world_fixtures(const SpecialistWorld& world, const fs::path& dir) {
  fs::create_directories(dir / "programs");
  for (const auto& [id, program] : world.programs) {
    std::ofstream out(dir / "programs" / (id + ".json"));
    out << md::json(program).dump(2) << "\n";
  }
  md::json agents = md::json::array();
  for (const auto& agent : world.registry.agents())
    agents.push_back(md::json{{"id", agent.id},
                              {"backend", "scripted"},
                              {"program", "programs/" + agent.id + ".json"},
                              {"params", agent.params}});
  fs::path agents_path = dir / "agents.json";
  {
    std::ofstream out(agents_path);
    out << md::json{{"agents", agents}}.dump(2) << "\n";
  }
  std::ofstream dataset(dir / "dataset.jsonl");
  for (const auto& question : world.questions) {
    md::json record;
    record["id"] = question.id;
    record["question"] = question.stem;
    md::json choices = md::json::array();
    for (const auto& choice : question.choices) choices.push_back(choice.text);
    record["choices"] = choices;
    record["answer"] = std::string(1, *question.gold_answer);
    dataset << record.dump() << "\n";
  }
  return agents_path;
}

}  // namespace testutil
