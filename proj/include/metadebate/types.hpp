#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metadebate/errors.hpp"

namespace metadebate {

using json = nlohmann::json;

enum class Framework { mad, dmad };
enum class BackendKind { http, scripted };

inline std::string to_string(Framework fw) { return fw == Framework::mad ? "mad" : "dmad"; }

inline Framework framework_from_string(const std::string& s) {
  if (s == "mad") return Framework::mad;
  if (s == "dmad") return Framework::dmad;
  throw Error(Errc::InvalidSpec, "unknown framework '" + s + "'");
}

// ---------------------------------------------------------------------------
// Agents

struct GenParams {
  double temperature = 0.0;
  int max_tokens = 2048;

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

// Connection details for http-backed agents. The API key is read from the
// named environment variable at request time, never stored.
struct HttpEndpoint {
  std::string base_url;
  std::string api_key_env;

  friend bool operator==(const HttpEndpoint&, const HttpEndpoint&) = default;
};

struct AgentSpec {
  std::string id;
  int display_index = 0;  // 1-based position in the registry; set by validate_registry
  BackendKind backend = BackendKind::scripted;
  std::string model_name;  // http only
  GenParams params;
  std::optional<HttpEndpoint> endpoint;    // http only
  std::optional<std::string> program_path; // scripted only

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

// Validated agent set. Order is the registry order: the agent with
// display_index k is at position k-1, and reviewers see proposals labeled
// "Agent k" in exactly this order.
class AgentRegistry {
 public:
  const std::vector<AgentSpec>& agents() const { return agents_; }
  std::size_t size() const { return agents_.size(); }

  bool contains(const std::string& id) const { return index_of_.count(id) > 0; }

  const AgentSpec& at(const std::string& id) const {
    auto it = index_of_.find(id);
    if (it == index_of_.end()) throw Error(Errc::UnknownAgent, "agent '" + id + "' is not registered");
    return agents_[it->second];
  }

  const AgentSpec& by_display_index(int index) const {
    if (index < 1 || static_cast<std::size_t>(index) > agents_.size())
      throw Error(Errc::UnknownAgent, "display index " + std::to_string(index) + " out of range");
    return agents_[static_cast<std::size_t>(index - 1)];
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(agents_.size());
    for (const auto& a : agents_) out.push_back(a.id);
    return out;
  }

  friend AgentRegistry validate_registry(std::vector<AgentSpec> agents);
  friend bool operator==(const AgentRegistry&, const AgentRegistry&) = default;

 private:
  std::vector<AgentSpec> agents_;
  std::map<std::string, std::size_t> index_of_;
};

inline AgentRegistry validate_registry(std::vector<AgentSpec> agents) {
  if (agents.empty()) throw Error(Errc::EmptyRegistry, "registry needs at least one agent");
  AgentRegistry registry;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    AgentSpec& agent = agents[i];
    if (agent.id.empty()) throw Error(Errc::InvalidSpec, "agent id must be non-empty");
    if (registry.index_of_.count(agent.id))
      throw Error(Errc::DuplicateAgentId, "agent id '" + agent.id + "' appears twice");
    if (agent.params.temperature < 0.0)
      throw Error(Errc::InvalidSpec, "agent '" + agent.id + "': temperature must be >= 0");
    if (agent.params.max_tokens <= 0)
      throw Error(Errc::InvalidSpec, "agent '" + agent.id + "': max_tokens must be positive");
    agent.display_index = static_cast<int>(i + 1);
    registry.index_of_[agent.id] = i;
  }
  registry.agents_ = std::move(agents);
  return registry;
}

// ---------------------------------------------------------------------------
// Roles

struct RoleSpec {
  std::string id;
  Framework framework = Framework::mad;
  std::string name;         // human label, e.g. "Affirmative"
  std::string description;  // prompt fragment describing the role's function
  int ordinal = 0;          // 1-based position in the role set

  friend bool operator==(const RoleSpec&, const RoleSpec&) = default;
};

class RoleSet {
 public:
  const std::vector<RoleSpec>& roles() const { return roles_; }
  std::size_t size() const { return roles_.size(); }
  Framework framework() const { return framework_; }

  bool contains(const std::string& id) const { return index_of_.count(id) > 0; }

  const RoleSpec& at(const std::string& id) const {
    auto it = index_of_.find(id);
    if (it == index_of_.end()) throw Error(Errc::UnknownRole, "role '" + id + "' is not in the role set");
    return roles_[it->second];
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(roles_.size());
    for (const auto& r : roles_) out.push_back(r.id);
    return out;
  }

  friend RoleSet validate_role_set(std::vector<RoleSpec> roles);
  friend bool operator==(const RoleSet&, const RoleSet&) = default;

 private:
  std::vector<RoleSpec> roles_;
  std::map<std::string, std::size_t> index_of_;
  Framework framework_ = Framework::mad;
};

inline RoleSet validate_role_set(std::vector<RoleSpec> roles) {
  RoleSet set;
  if (!roles.empty()) set.framework_ = roles.front().framework;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    RoleSpec& role = roles[i];
    if (role.id.empty()) throw Error(Errc::InvalidSpec, "role id must be non-empty");
    if (set.index_of_.count(role.id))
      throw Error(Errc::DuplicateRoleId, "role id '" + role.id + "' appears twice");
    if (role.framework != set.framework_)
      throw Error(Errc::InvalidSpec, "role set mixes frameworks");
    role.ordinal = static_cast<int>(i + 1);
    set.index_of_[role.id] = i;
  }
  set.roles_ = std::move(roles);
  return set;
}

// ---------------------------------------------------------------------------
// Questions

// Opaque binary reference; never decoded by the core.
struct Attachment {
  std::string path;
  std::string media_type;

  friend bool operator==(const Attachment&, const Attachment&) = default;
};

struct Choice {
  char letter = 'A';
  std::string text;

  friend bool operator==(const Choice&, const Choice&) = default;
};

struct Question {
  std::string id;
  std::string stem;
  std::vector<Choice> choices;
  std::optional<char> gold_answer;
  std::vector<Attachment> attachments;

  std::string letters() const {
    std::string out;
    for (const auto& c : choices) out.push_back(c.letter);
    return out;
  }

  friend bool operator==(const Question&, const Question&) = default;
};

// Canonicalizes choice letters to uppercase A.., checks the gold answer.
// Letters must run A, B, C, ... with no gaps; more than 26 choices is invalid.
inline Question validate_question(Question raw) {
  if (raw.choices.size() < 2)
    throw Error(Errc::TooFewChoices, "question '" + raw.id + "' has " +
                                         std::to_string(raw.choices.size()) + " choice(s), need >= 2");
  if (raw.choices.size() > 26)
    throw Error(Errc::TooManyChoices, "question '" + raw.id + "' has more than 26 choices");
  for (std::size_t i = 0; i < raw.choices.size(); ++i) {
    char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(raw.choices[i].letter)));
    if (upper != static_cast<char>('A' + i))
      throw Error(Errc::BadChoiceLetters, "question '" + raw.id + "': choice letters must ascend from A");
    raw.choices[i].letter = upper;
  }
  if (raw.gold_answer) {
    char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(*raw.gold_answer)));
    if (upper < 'A' || upper >= static_cast<char>('A' + raw.choices.size()))
      throw Error(Errc::BadGoldAnswer, "question '" + raw.id + "': gold answer '" +
                                           std::string(1, *raw.gold_answer) + "' is not a choice letter");
    raw.gold_answer = upper;
  }
  return raw;
}

// ---------------------------------------------------------------------------
// Meta-debate values

struct TokenUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;

  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct Proposal {
  std::string question_id;
  std::string role_id;
  std::string agent_id;
  std::string text;
  std::optional<TokenUsage> token_usage;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

enum class ReviewStatus { ok, excluded };

// Per-criterion integer scores for every proposal the evaluator was shown,
// keyed proposal agent id -> criterion name -> score in [1,5].
struct Review {
  std::string question_id;
  std::string role_id;
  std::string evaluator_id;
  std::map<std::string, std::map<std::string, int>> scores;
  std::string rationale;
  ReviewStatus status = ReviewStatus::ok;

  friend bool operator==(const Review&, const Review&) = default;
};

struct SuitabilityCell {
  double mean = 0.0;
  int contributing_evaluators = 0;

  friend bool operator==(const SuitabilityCell&, const SuitabilityCell&) = default;
};

// Dense grid over the role set (ordinal order) x the registry (display order),
// so row/column indices line up with ordinals and display indices.
struct SuitabilityMatrix {
  std::string question_id;
  std::vector<std::string> role_ids;
  std::vector<std::string> agent_ids;
  std::vector<std::vector<SuitabilityCell>> cells;  // [role][agent]

  const SuitabilityCell& cell(const std::string& role_id, const std::string& agent_id) const {
    auto r = std::find(role_ids.begin(), role_ids.end(), role_id);
    auto a = std::find(agent_ids.begin(), agent_ids.end(), agent_id);
    if (r == role_ids.end() || a == agent_ids.end())
      throw Error(Errc::InvalidSpec, "no cell for (" + role_id + ", " + agent_id + ")");
    return cells[static_cast<std::size_t>(r - role_ids.begin())]
                [static_cast<std::size_t>(a - agent_ids.begin())];
  }

  friend bool operator==(const SuitabilityMatrix&, const SuitabilityMatrix&) = default;
};

enum class AssignmentKind { uniform, random_draw, capability_aware };
enum class RandomMode { per_run, per_question };

struct Provenance {
  AssignmentKind kind = AssignmentKind::uniform;
  std::optional<std::uint64_t> seed;   // random only
  std::optional<RandomMode> mode;      // random only

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Assignment {
  std::string question_id;
  std::map<std::string, std::string> mapping;  // role id -> agent id; duplicates permitted
  Provenance provenance;

  const std::string& agent_for(const std::string& role_id) const {
    auto it = mapping.find(role_id);
    if (it == mapping.end())
      throw Error(Errc::UnknownRole, "assignment has no agent for role '" + role_id + "'");
    return it->second;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Total on the role set, values registered; one agent may hold several roles.
inline void validate_assignment(const Assignment& assignment, const RoleSet& roles,
                                const AgentRegistry& registry) {
  if (assignment.mapping.size() != roles.size())
    throw Error(Errc::ValidationError, "assignment does not cover the role set");
  for (const auto& [role_id, agent_id] : assignment.mapping) {
    if (!roles.contains(role_id))
      throw Error(Errc::UnknownRole, "assignment names unknown role '" + role_id + "'");
    if (!registry.contains(agent_id))
      throw Error(Errc::UnknownAgent, "assignment names unknown agent '" + agent_id + "'");
  }
}

// ---------------------------------------------------------------------------
// Debate outputs

struct Verdict {
  std::optional<char> final_answer;
  std::optional<bool> correct;  // set only when the gold answer is known
  bool terminated_early = false;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline Verdict make_verdict(std::optional<char> final_answer, std::optional<char> gold_answer,
                            bool terminated_early) {
  Verdict v;
  v.final_answer = final_answer;
  v.terminated_early = terminated_early;
  if (gold_answer) v.correct = final_answer && *final_answer == *gold_answer;
  return v;
}

struct Turn {
  int round = 1;
  std::string role_id;
  std::string agent_id;
  std::string content;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Transcript {
  std::string question_id;
  Framework framework = Framework::mad;
  std::vector<Turn> turns;
  Verdict verdict;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

inline void validate_transcript(const Transcript& transcript, const Assignment& assignment) {
  int prev_round = 0;
  for (const auto& turn : transcript.turns) {
    if (turn.round < prev_round)
      throw Error(Errc::ValidationError, "transcript rounds must be non-decreasing");
    prev_round = turn.round;
    if (assignment.agent_for(turn.role_id) != turn.agent_id)
      throw Error(Errc::ValidationError, "turn agent does not match the assignment for role '" +
                                             turn.role_id + "'");
  }
}

// ---------------------------------------------------------------------------
// Criteria

struct Criterion {
  std::string name;
  std::string description;

  friend bool operator==(const Criterion&, const Criterion&) = default;
};

struct CriteriaSet {
  std::string role_id;
  std::vector<Criterion> criteria;
  int scale_min = 1;
  int scale_max = 5;

  friend bool operator==(const CriteriaSet&, const CriteriaSet&) = default;
};

inline CriteriaSet validate_criteria_set(CriteriaSet set) {
  if (set.criteria.size() < 2 || set.criteria.size() > 3)
    throw Error(Errc::InvalidSpec, "criteria set for role '" + set.role_id + "' must have 2 or 3 criteria");
  if (set.scale_min != 1 || set.scale_max != 5)
    throw Error(Errc::InvalidSpec, "criteria scale must be exactly 1..5");
  for (std::size_t i = 0; i < set.criteria.size(); ++i) {
    if (set.criteria[i].name.empty())
      throw Error(Errc::InvalidSpec, "criterion names must be non-empty");
    for (std::size_t j = i + 1; j < set.criteria.size(); ++j)
      if (set.criteria[i].name == set.criteria[j].name)
        throw Error(Errc::InvalidSpec, "criterion name '" + set.criteria[i].name + "' appears twice");
  }
  return set;
}

// ---------------------------------------------------------------------------
// JSON serialization

inline void to_json(json& j, const GenParams& p) {
  j = json{{"temperature", p.temperature}, {"max_tokens", p.max_tokens}};
}
inline void from_json(const json& j, GenParams& p) {
  p.temperature = j.value("temperature", 0.0);
  p.max_tokens = j.value("max_tokens", 2048);
}

inline void to_json(json& j, const HttpEndpoint& e) {
  j = json{{"base_url", e.base_url}, {"api_key_env", e.api_key_env}};
}
inline void from_json(const json& j, HttpEndpoint& e) {
  e.base_url = j.value("base_url", "");
  e.api_key_env = j.value("api_key_env", "");
}

inline void to_json(json& j, const AgentSpec& a) {
  j = json{{"id", a.id},
           {"display_index", a.display_index},
           {"backend", a.backend == BackendKind::http ? "http" : "scripted"},
           {"params", a.params}};
  if (!a.model_name.empty()) j["model"] = a.model_name;
  if (a.endpoint) j["endpoint"] = *a.endpoint;
  if (a.program_path) j["program"] = *a.program_path;
}
inline void from_json(const json& j, AgentSpec& a) {
  a.id = j.at("id").get<std::string>();
  a.display_index = j.value("display_index", 0);
  std::string backend = j.value("backend", "scripted");
  if (backend == "http") a.backend = BackendKind::http;
  else if (backend == "scripted") a.backend = BackendKind::scripted;
  else throw Error(Errc::InvalidSpec, "unknown backend '" + backend + "'");
  a.model_name = j.value("model", "");
  if (j.contains("params")) a.params = j.at("params").get<GenParams>();
  if (j.contains("endpoint")) a.endpoint = j.at("endpoint").get<HttpEndpoint>();
  if (j.contains("program")) a.program_path = j.at("program").get<std::string>();
}

inline void to_json(json& j, const RoleSpec& r) {
  j = json{{"id", r.id},
           {"framework", to_string(r.framework)},
           {"name", r.name},
           {"description", r.description},
           {"ordinal", r.ordinal}};
}
inline void from_json(const json& j, RoleSpec& r) {
  r.id = j.at("id").get<std::string>();
  r.framework = framework_from_string(j.value("framework", "mad"));
  r.name = j.value("name", "");
  r.description = j.value("description", "");
  r.ordinal = j.value("ordinal", 0);
}

inline void to_json(json& j, const Attachment& a) {
  j = json{{"path", a.path}, {"media_type", a.media_type}};
}
inline void from_json(const json& j, Attachment& a) {
  a.path = j.value("path", "");
  a.media_type = j.value("media_type", "");
}

inline void to_json(json& j, const Choice& c) {
  j = json{{"letter", std::string(1, c.letter)}, {"text", c.text}};
}
inline void from_json(const json& j, Choice& c) {
  std::string letter = j.at("letter").get<std::string>();
  if (letter.size() != 1) throw Error(Errc::ParseError, "choice letter must be one character");
  c.letter = letter[0];
  c.text = j.value("text", "");
}

inline void to_json(json& j, const Question& q) {
  j = json{{"id", q.id}, {"stem", q.stem}, {"choices", q.choices}};
  if (q.gold_answer) j["gold_answer"] = std::string(1, *q.gold_answer);
  else j["gold_answer"] = nullptr;
  j["attachments"] = q.attachments;
}
inline void from_json(const json& j, Question& q) {
  q.id = j.at("id").get<std::string>();
  q.stem = j.value("stem", "");
  q.choices = j.value("choices", std::vector<Choice>{});
  if (j.contains("gold_answer") && !j.at("gold_answer").is_null()) {
    std::string gold = j.at("gold_answer").get<std::string>();
    if (gold.size() != 1) throw Error(Errc::ParseError, "gold answer must be one letter");
    q.gold_answer = gold[0];
  } else {
    q.gold_answer.reset();
  }
  q.attachments = j.value("attachments", std::vector<Attachment>{});
}

inline void to_json(json& j, const TokenUsage& u) {
  j = json{{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens}};
}
inline void from_json(const json& j, TokenUsage& u) {
  u.prompt_tokens = j.value("prompt_tokens", 0);
  u.completion_tokens = j.value("completion_tokens", 0);
}

inline void to_json(json& j, const Proposal& p) {
  j = json{{"question_id", p.question_id},
           {"role_id", p.role_id},
           {"agent_id", p.agent_id},
           {"text", p.text}};
  if (p.token_usage) j["token_usage"] = *p.token_usage;
}
inline void from_json(const json& j, Proposal& p) {
  p.question_id = j.at("question_id").get<std::string>();
  p.role_id = j.at("role_id").get<std::string>();
  p.agent_id = j.at("agent_id").get<std::string>();
  p.text = j.value("text", "");
  if (j.contains("token_usage")) p.token_usage = j.at("token_usage").get<TokenUsage>();
  else p.token_usage.reset();
}

inline void to_json(json& j, const Review& r) {
  j = json{{"question_id", r.question_id},
           {"role_id", r.role_id},
           {"evaluator_id", r.evaluator_id},
           {"scores", r.scores},
           {"rationale", r.rationale},
           {"status", r.status == ReviewStatus::ok ? "ok" : "excluded"}};
}
inline void from_json(const json& j, Review& r) {
  r.question_id = j.at("question_id").get<std::string>();
  r.role_id = j.at("role_id").get<std::string>();
  r.evaluator_id = j.at("evaluator_id").get<std::string>();
  r.scores = j.value("scores", std::map<std::string, std::map<std::string, int>>{});
  r.rationale = j.value("rationale", "");
  r.status = j.value("status", "ok") == "ok" ? ReviewStatus::ok : ReviewStatus::excluded;
}

inline void to_json(json& j, const SuitabilityCell& c) {
  j = json{{"mean", c.mean}, {"contributing_evaluators", c.contributing_evaluators}};
}
inline void from_json(const json& j, SuitabilityCell& c) {
  c.mean = j.value("mean", 0.0);
  c.contributing_evaluators = j.value("contributing_evaluators", 0);
}

inline void to_json(json& j, const SuitabilityMatrix& m) {
  j = json{{"question_id", m.question_id},
           {"role_ids", m.role_ids},
           {"agent_ids", m.agent_ids},
           {"cells", m.cells}};
}
inline void from_json(const json& j, SuitabilityMatrix& m) {
  m.question_id = j.at("question_id").get<std::string>();
  m.role_ids = j.value("role_ids", std::vector<std::string>{});
  m.agent_ids = j.value("agent_ids", std::vector<std::string>{});
  m.cells = j.value("cells", std::vector<std::vector<SuitabilityCell>>{});
}

inline void to_json(json& j, const Provenance& p) {
  switch (p.kind) {
    case AssignmentKind::uniform: j = json{{"kind", "uniform"}}; break;
    case AssignmentKind::random_draw: j = json{{"kind", "random"}}; break;
    case AssignmentKind::capability_aware: j = json{{"kind", "capability_aware"}}; break;
  }
  if (p.seed) j["seed"] = *p.seed;
  if (p.mode) j["mode"] = *p.mode == RandomMode::per_run ? "per_run" : "per_question";
}
inline void from_json(const json& j, Provenance& p) {
  std::string kind = j.value("kind", "uniform");
  if (kind == "uniform") p.kind = AssignmentKind::uniform;
  else if (kind == "random") p.kind = AssignmentKind::random_draw;
  else if (kind == "capability_aware") p.kind = AssignmentKind::capability_aware;
  else throw Error(Errc::ParseError, "unknown provenance kind '" + kind + "'");
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  else p.seed.reset();
  if (j.contains("mode"))
    p.mode = j.at("mode").get<std::string>() == "per_run" ? RandomMode::per_run : RandomMode::per_question;
  else p.mode.reset();
}

inline void to_json(json& j, const Assignment& a) {
  j = json{{"question_id", a.question_id}, {"mapping", a.mapping}, {"provenance", a.provenance}};
}
inline void from_json(const json& j, Assignment& a) {
  a.question_id = j.value("question_id", "");
  a.mapping = j.value("mapping", std::map<std::string, std::string>{});
  if (j.contains("provenance")) a.provenance = j.at("provenance").get<Provenance>();
}

inline void to_json(json& j, const Verdict& v) {
  j = json::object();
  if (v.final_answer) j["final_answer"] = std::string(1, *v.final_answer);
  else j["final_answer"] = nullptr;
  if (v.correct) j["correct"] = *v.correct;
  else j["correct"] = nullptr;
  j["terminated_early"] = v.terminated_early;
}
inline void from_json(const json& j, Verdict& v) {
  if (j.contains("final_answer") && !j.at("final_answer").is_null()) {
    std::string s = j.at("final_answer").get<std::string>();
    if (s.size() != 1) throw Error(Errc::ParseError, "final answer must be one letter");
    v.final_answer = s[0];
  } else {
    v.final_answer.reset();
  }
  if (j.contains("correct") && !j.at("correct").is_null()) v.correct = j.at("correct").get<bool>();
  else v.correct.reset();
  v.terminated_early = j.value("terminated_early", false);
}

inline void to_json(json& j, const Turn& t) {
  j = json{{"round", t.round}, {"role", t.role_id}, {"agent", t.agent_id}, {"content", t.content}};
}
inline void from_json(const json& j, Turn& t) {
  t.round = j.value("round", 1);
  t.role_id = j.value("role", "");
  t.agent_id = j.value("agent", "");
  t.content = j.value("content", "");
}

inline void to_json(json& j, const Transcript& t) {
  j = json{{"question_id", t.question_id},
           {"framework", to_string(t.framework)},
           {"turns", t.turns},
           {"verdict", t.verdict}};
}
inline void from_json(const json& j, Transcript& t) {
  t.question_id = j.value("question_id", "");
  t.framework = framework_from_string(j.value("framework", "mad"));
  t.turns = j.value("turns", std::vector<Turn>{});
  if (j.contains("verdict")) t.verdict = j.at("verdict").get<Verdict>();
}

inline void to_json(json& j, const Criterion& c) {
  j = json{{"name", c.name}, {"description", c.description}};
}
inline void from_json(const json& j, Criterion& c) {
  c.name = j.at("name").get<std::string>();
  c.description = j.value("description", "");
}

inline void to_json(json& j, const CriteriaSet& s) {
  j = json{{"role_id", s.role_id},
           {"criteria", s.criteria},
           {"scale_min", s.scale_min},
           {"scale_max", s.scale_max}};
}
inline void from_json(const json& j, CriteriaSet& s) {
  s.role_id = j.value("role_id", "");
  s.criteria = j.value("criteria", std::vector<Criterion>{});
  s.scale_min = j.value("scale_min", 1);
  s.scale_max = j.value("scale_max", 5);
}

}  // namespace metadebate
