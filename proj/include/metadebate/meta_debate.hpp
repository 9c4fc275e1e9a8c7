#pragma once

#include <map>
#include <string>
#include <vector>

#include "metadebate/errors.hpp"
#include "metadebate/gateway.hpp"
#include "metadebate/prompts.hpp"
#include "metadebate/review_parse.hpp"
#include "metadebate/types.hpp"

namespace metadebate {

struct Exclusion {
  std::string evaluator_id;
  std::string role_id;
  std::string reason;

  friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

// Everything one meta-debate produced for one question: all m*n proposals,
// all reviews, the averaged suitability grid, and the argmax assignment.
struct MetaDebateReport {
  std::string question_id;
  std::vector<Proposal> proposals;
  std::vector<Review> reviews;
  SuitabilityMatrix matrix;
  Assignment assignment;
  std::vector<Exclusion> exclusions;
};

inline void to_json(json& j, const Exclusion& e) {
  j = json{{"evaluator_id", e.evaluator_id}, {"role_id", e.role_id}, {"reason", e.reason}};
}
inline void from_json(const json& j, Exclusion& e) {
  e.evaluator_id = j.value("evaluator_id", "");
  e.role_id = j.value("role_id", "");
  e.reason = j.value("reason", "");
}

inline void to_json(json& j, const MetaDebateReport& r) {
  j = json{{"question_id", r.question_id}, {"proposals", r.proposals},
           {"reviews", r.reviews},         {"matrix", r.matrix},
           {"assignment", r.assignment},   {"exclusions", r.exclusions}};
}
inline void from_json(const json& j, MetaDebateReport& r) {
  r.question_id = j.value("question_id", "");
  r.proposals = j.value("proposals", std::vector<Proposal>{});
  r.reviews = j.value("reviews", std::vector<Review>{});
  if (j.contains("matrix")) r.matrix = j.at("matrix").get<SuitabilityMatrix>();
  if (j.contains("assignment")) r.assignment = j.at("assignment").get<Assignment>();
  r.exclusions = j.value("exclusions", std::vector<Exclusion>{});
}

// One proposal: the uniform template with the question and role description
// inserted, sent to one agent.
inline Proposal generate_proposal(Gateway& gateway, const AgentSpec& agent, const RoleSpec& role,
                                  const Question& question) {
  ChatRequest request = make_user_request(agent.id, prompts::proposal_prompt(question, role),
                                          agent.params, question.attachments);
  ChatResponse response = gateway.complete(request);
  if (response.text.empty())
    throw Error(Errc::EmptyResponse, "agent '" + agent.id + "' returned an empty proposal for role '" +
                                         role.id + "'");
  Proposal proposal;
  proposal.question_id = question.id;
  proposal.role_id = role.id;
  proposal.agent_id = agent.id;
  proposal.text = response.text;
  proposal.token_usage = response.token_usage;
  return proposal;
}

// How many parse attempts one evaluator gets for one role: the initial ask
// plus two re-asks. Exhausting them excludes the evaluator for this role.
inline constexpr int kReviewReAsks = 2;

// One review call: the evaluator sees all m proposals for this role at once,
// labeled "Agent k Response" in registry order, and scores each per criterion.
inline Review review_role(Gateway& gateway, const AgentSpec& evaluator, const RoleSpec& role,
                          const RoleSet& roles, const Question& question,
                          const std::vector<Proposal>& proposals, const CriteriaSet& criteria,
                          const AgentRegistry& registry) {
  if (criteria.criteria.empty())
    throw Error(Errc::InvalidSpec, "review needs a non-empty criteria set");
  if (proposals.size() != registry.size())
    throw Error(Errc::InvalidSpec, "review needs exactly one proposal per registered agent");

  // Registry order drives the "Agent k" labels.
  std::vector<std::string> texts(registry.size());
  for (const auto& proposal : proposals) {
    if (proposal.role_id != role.id)
      throw Error(Errc::InvalidSpec, "proposal for role '" + proposal.role_id +
                                         "' passed to a review of role '" + role.id + "'");
    texts[static_cast<std::size_t>(registry.at(proposal.agent_id).display_index - 1)] = proposal.text;
  }

  std::vector<std::string> criteria_names;
  for (const auto& c : criteria.criteria) criteria_names.push_back(c.name);

  std::string prompt = prompts::review_prompt(question, role, roles, texts, criteria);

  Review review;
  review.question_id = question.id;
  review.role_id = role.id;
  review.evaluator_id = evaluator.id;

  for (int attempt = 0; attempt <= kReviewReAsks; ++attempt) {
    ChatRequest request = make_user_request(evaluator.id, prompt, evaluator.params);
    if (attempt > 0)
      request.messages.push_back(ChatMessage{
          ChatRole::user,
          prompts::review_reask_note() + " (attempt " + std::to_string(attempt + 1) + ")",
          {}});
    ChatResponse response = gateway.complete(request);
    review.rationale = response.text;
    if (auto parsed = parse_review_scores(response.text, registry.size(), criteria_names)) {
      for (const auto& [index, per_criterion] : *parsed)
        review.scores[registry.by_display_index(index).id] = per_criterion;
      review.status = ReviewStatus::ok;
      return review;
    }
  }
  review.scores.clear();
  review.status = ReviewStatus::excluded;
  return review;
}

// The evaluator's single number for one proposal: the unweighted mean of its
// per-criterion scores.
inline double evaluator_score(const Review& review, const std::string& proposal_agent_id) {
  if (review.status != ReviewStatus::ok)
    throw Error(Errc::MissingProposalScore, "review by '" + review.evaluator_id + "' is excluded");
  auto it = review.scores.find(proposal_agent_id);
  if (it == review.scores.end() || it->second.empty())
    throw Error(Errc::MissingProposalScore, "review by '" + review.evaluator_id +
                                                "' has no scores for agent '" + proposal_agent_id + "'");
  double sum = 0.0;
  for (const auto& [_, score] : it->second) sum += score;
  return sum / static_cast<double>(it->second.size());
}

// Averages evaluator scores per (role, agent) over contributing (non-excluded)
// evaluators only; excluded evaluators carry no information.
inline SuitabilityMatrix aggregate(const std::string& question_id, const std::vector<Review>& reviews,
                                   const RoleSet& roles, const AgentRegistry& registry) {
  SuitabilityMatrix matrix;
  matrix.question_id = question_id;
  matrix.role_ids = roles.ids();
  matrix.agent_ids = registry.ids();
  matrix.cells.assign(roles.size(), std::vector<SuitabilityCell>(registry.size()));

  for (std::size_t r = 0; r < roles.size(); ++r) {
    const std::string& role_id = matrix.role_ids[r];
    for (std::size_t a = 0; a < registry.size(); ++a) {
      const std::string& agent_id = matrix.agent_ids[a];
      double sum = 0.0;
      int contributing = 0;
      for (const auto& review : reviews) {
        if (review.role_id != role_id || review.status != ReviewStatus::ok) continue;
        if (!review.scores.count(agent_id)) continue;
        sum += evaluator_score(review, agent_id);
        ++contributing;
      }
      if (contributing == 0)
        throw Error(Errc::NoValidEvaluators,
                    "no valid evaluator scores for (" + role_id + ", " + agent_id + ")");
      matrix.cells[r][a] = SuitabilityCell{sum / contributing, contributing};
    }
  }
  return matrix;
}

// Each role independently goes to its highest-scored agent; ties break to the
// lowest display index. The same agent may win several roles.
inline Assignment assign(const SuitabilityMatrix& matrix) {
  Assignment assignment;
  assignment.question_id = matrix.question_id;
  assignment.provenance.kind = AssignmentKind::capability_aware;
  for (std::size_t r = 0; r < matrix.role_ids.size(); ++r) {
    if (matrix.cells[r].size() != matrix.agent_ids.size() || matrix.agent_ids.empty())
      throw Error(Errc::InvalidSpec, "suitability matrix is not total on roles x agents");
    std::size_t best = 0;
    for (std::size_t a = 1; a < matrix.cells[r].size(); ++a)
      if (matrix.cells[r][a].mean > matrix.cells[r][best].mean) best = a;
    assignment.mapping[matrix.role_ids[r]] = matrix.agent_ids[best];
  }
  return assignment;
}

// The full two-step pipeline for one question: m*n proposals, then one review
// call per (evaluator, role), then aggregation and argmax assignment.
inline MetaDebateReport run_meta_debate(const Question& question, const RoleSet& roles,
                                        const AgentRegistry& registry,
                                        const std::map<std::string, CriteriaSet>& criteria_by_role,
                                        Gateway& gateway) {
  for (const auto& role : roles.roles())
    if (!criteria_by_role.count(role.id))
      throw Error(Errc::UnknownRole, "no criteria available for role '" + role.id + "'");

  MetaDebateReport report;
  report.question_id = question.id;

  // Step 1: every agent attempts every role.
  std::map<std::string, std::vector<Proposal>> proposals_by_role;
  for (const auto& role : roles.roles()) {
    for (const auto& agent : registry.agents()) {
      Proposal proposal = generate_proposal(gateway, agent, role, question);
      proposals_by_role[role.id].push_back(proposal);
      report.proposals.push_back(std::move(proposal));
    }
  }

  // Step 2: every agent reviews every role's proposal slate (its own included).
  for (const auto& role : roles.roles()) {
    const CriteriaSet& criteria = criteria_by_role.at(role.id);
    for (const auto& evaluator : registry.agents()) {
      Review review = review_role(gateway, evaluator, role, roles, question,
                                  proposals_by_role.at(role.id), criteria, registry);
      if (review.status == ReviewStatus::excluded)
        report.exclusions.push_back(Exclusion{
            evaluator.id, role.id,
            "no parseable scores after " + std::to_string(1 + kReviewReAsks) + " attempts"});
      report.reviews.push_back(std::move(review));
    }
  }

  report.matrix = aggregate(question.id, report.reviews, roles, registry);
  report.assignment = assign(report.matrix);
  report.assignment.question_id = question.id;
  return report;
}

}  // namespace metadebate
