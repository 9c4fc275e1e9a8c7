#pragma once

#include <map>
#include <optional>
#include <string>

#include "metadebate/digest.hpp"
#include "metadebate/errors.hpp"
#include "metadebate/meta_debate.hpp"
#include "metadebate/rng.hpp"
#include "metadebate/types.hpp"

namespace metadebate {

struct StrategySpec {
  AssignmentKind kind = AssignmentKind::uniform;
  std::string uniform_agent_id;                 // uniform only
  std::uint64_t seed = 0;                       // random only
  RandomMode mode = RandomMode::per_run;        // random only

  static StrategySpec uniform(std::string agent_id) {
    StrategySpec s;
    s.kind = AssignmentKind::uniform;
    s.uniform_agent_id = std::move(agent_id);
    return s;
  }
  static StrategySpec random(std::uint64_t seed, RandomMode mode = RandomMode::per_run) {
    StrategySpec s;
    s.kind = AssignmentKind::random_draw;
    s.seed = seed;
    s.mode = mode;
    return s;
  }
  static StrategySpec capability_aware() {
    StrategySpec s;
    s.kind = AssignmentKind::capability_aware;
    return s;
  }

  std::string label() const {
    switch (kind) {
      case AssignmentKind::uniform: return "uniform:" + uniform_agent_id;
      case AssignmentKind::random_draw:
        return "random:seed=" + std::to_string(seed) +
               (mode == RandomMode::per_run ? ":per_run" : ":per_question");
      case AssignmentKind::capability_aware: return "capability_aware";
    }
    return "?";
  }

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

inline void to_json(json& j, const StrategySpec& s) {
  switch (s.kind) {
    case AssignmentKind::uniform:
      j = json{{"kind", "uniform"}, {"agent", s.uniform_agent_id}};
      break;
    case AssignmentKind::random_draw:
      j = json{{"kind", "random"},
               {"seed", s.seed},
               {"mode", s.mode == RandomMode::per_run ? "per_run" : "per_question"}};
      break;
    case AssignmentKind::capability_aware:
      j = json{{"kind", "capability_aware"}};
      break;
  }
}
inline void from_json(const json& j, StrategySpec& s) {
  std::string kind = j.value("kind", "uniform");
  if (kind == "uniform") {
    s.kind = AssignmentKind::uniform;
    s.uniform_agent_id = j.value("agent", "");
  } else if (kind == "random") {
    s.kind = AssignmentKind::random_draw;
    s.seed = j.value("seed", std::uint64_t{0});
    s.mode = j.value("mode", "per_run") == "per_run" ? RandomMode::per_run : RandomMode::per_question;
  } else if (kind == "capability_aware") {
    s.kind = AssignmentKind::capability_aware;
  } else {
    throw Error(Errc::ParseError, "unknown strategy kind '" + kind + "'");
  }
}

// Every role to one agent — the homogeneous baseline.
inline Assignment assign_uniform(const RoleSet& roles, const AgentRegistry& registry,
                                 const std::string& agent_id, const std::string& question_id = "") {
  registry.at(agent_id);  // throws UnknownAgent
  Assignment assignment;
  assignment.question_id = question_id;
  assignment.provenance.kind = AssignmentKind::uniform;
  for (const auto& role : roles.roles()) assignment.mapping[role.id] = agent_id;
  return assignment;
}

// Seeded uniform draw per role over the registry, duplicates allowed. The
// per_run stream depends on the seed alone (one configuration reused for the
// whole run); per_question folds the question id into the seed. A pure
// function of (roles, registry order, seed, mode, question id) by way of
// SplitMix64 — see rng.hpp.
inline Assignment assign_random(const RoleSet& roles, const AgentRegistry& registry,
                                std::uint64_t seed, RandomMode mode,
                                const std::string& question_id = "") {
  if (registry.size() == 0) throw Error(Errc::EmptyRegistry, "registry is empty");
  std::uint64_t state = mode == RandomMode::per_run ? seed : seed ^ fnv1a64(question_id);
  SplitMix64 rng(state);
  Assignment assignment;
  assignment.question_id = question_id;
  assignment.provenance.kind = AssignmentKind::random_draw;
  assignment.provenance.seed = seed;
  assignment.provenance.mode = mode;
  for (const auto& role : roles.roles()) {
    std::size_t index = static_cast<std::size_t>(rng.next_below(registry.size()));
    assignment.mapping[role.id] = registry.agents()[index].id;
  }
  return assignment;
}

// Meta-debate assignment: proposals, peer review, aggregate, argmax. The full
// report is handed back through report_out so callers can persist it.
inline Assignment assign_capability_aware(const Question& question, const RoleSet& roles,
                                          const AgentRegistry& registry,
                                          const std::map<std::string, CriteriaSet>& criteria_by_role,
                                          Gateway& gateway,
                                          MetaDebateReport* report_out = nullptr) {
  MetaDebateReport report = run_meta_debate(question, roles, registry, criteria_by_role, gateway);
  Assignment assignment = report.assignment;
  if (report_out) *report_out = std::move(report);
  return assignment;
}

}  // namespace metadebate
