#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "metadebate/metadebate.hpp"
#include "support.hpp"

using namespace metadebate;

namespace {

std::unique_ptr<Gateway> gateway_for(const std::map<std::string, ScriptedAgentProgram>& programs) {
  std::vector<AgentSpec> agents;
  for (const auto& [id, _] : programs) agents.push_back(testutil::scripted_agent(id));
  auto gateway = std::make_unique<Gateway>(validate_registry(agents));
  for (const auto& [id, program] : programs)
    gateway->set_backend(id, std::make_shared<ScriptedBackend>(program));
  return gateway;
}

Assignment uniform_assignment(const RoleSet& roles, const std::string& agent_id,
                              const std::string& question_id) {
  Assignment assignment;
  assignment.question_id = question_id;
  for (const auto& role : roles.roles()) assignment.mapping[role.id] = agent_id;
  return assignment;
}

}  // namespace

TEST_CASE("extract_answer patterns") {
  std::string letters = "ABCD";
  CHECK(extract_answer("…so the answer is (C).", letters) == 'C');
  CHECK(extract_answer("Answer: E", letters) == std::nullopt);
  CHECK(extract_answer("Answer: B … Answer: D", letters) == 'D');
  CHECK(extract_answer("Answer: B then later Answer: E", letters) == 'B');  // last valid wins
  CHECK(extract_answer("the answer is clear", letters) == std::nullopt);
  CHECK(extract_answer("I pick option\nC.", letters) == 'C');   // standalone trailing letter
  CHECK(extract_answer("I pick (B)", letters) == 'B');
  CHECK(extract_answer("answer: a", letters) == 'A');
  CHECK(extract_answer("", letters) == std::nullopt);
  CHECK(extract_answer("No commitment here.", letters) == std::nullopt);
  CHECK(extract_answer("Answer is D, not B. Final answer: C", letters) == 'C');
}

TEST_CASE("mad early stop on a decisive judge") {
  RoleSet roles = mad_role_set();
  Question question = testutil::make_question("q1", 4, 'C');
  ScriptedAgentProgram program;
  program.agent_id = "solo";
  program.rules = {{{"You are the moderator judge"}, "Both sides said things. Answer: C"}};
  program.default_response = "viewpoints";
  auto gateway = gateway_for({{"solo", program}});

  Transcript transcript = run_mad(question, roles, uniform_assignment(roles, "solo", "q1"),
                                  *gateway, EngineConfig::defaults(Framework::mad));
  CHECK(transcript.verdict.final_answer == 'C');
  CHECK(transcript.verdict.terminated_early);
  REQUIRE(transcript.verdict.correct.has_value());
  CHECK(*transcript.verdict.correct);
  REQUIRE(transcript.turns.size() == 3);  // affirmative, negative, judge, one round
  CHECK(transcript.turns[0].role_id == "affirmative");
  CHECK(transcript.turns[1].role_id == "negative");
  CHECK(transcript.turns[2].role_id == "judge");
  validate_transcript(transcript, uniform_assignment(roles, "solo", "q1"));
}

TEST_CASE("an agreeing negative still lets the debate complete") {
  RoleSet roles = mad_role_set();
  Question question = testutil::make_question("q2", 4, 'D');
  std::map<std::string, ScriptedAgentProgram> programs;
  ScriptedAgentProgram aff;
  aff.agent_id = "aff";
  aff.rules = {{{"You are affirmative side"}, "Option D is correct because the arcs match."}};
  programs["aff"] = aff;
  ScriptedAgentProgram neg;
  neg.agent_id = "neg";
  neg.rules = {{{"You are negative side"},
                "I agree with the affirmative side that option D is the correct answer."}};
  programs["neg"] = neg;
  ScriptedAgentProgram judge;
  judge.agent_id = "jud";
  judge.rules = {{{"You are the moderator judge"}, "The sides agree. Answer: D"}};
  programs["jud"] = judge;
  auto gateway = gateway_for(programs);

  Assignment assignment;
  assignment.question_id = "q2";
  assignment.mapping = {{"affirmative", "aff"}, {"negative", "neg"}, {"judge", "jud"}};
  Transcript transcript =
      run_mad(question, roles, assignment, *gateway, EngineConfig::defaults(Framework::mad));
  CHECK(transcript.verdict.final_answer == 'D');
  CHECK(transcript.turns[1].content.find("I agree with the affirmative side") != std::string::npos);
}

TEST_CASE("judge that never decides fails extraction at the forced round") {
  RoleSet roles = mad_role_set();
  Question question = testutil::make_question("q3", 4, 'A');
  ScriptedAgentProgram program;
  program.agent_id = "solo";
  program.default_response = "I refuse to commit to anything.";
  auto gateway = gateway_for({{"solo", program}});

  EngineConfig config = EngineConfig::defaults(Framework::mad);
  config.max_rounds = 1;
  try {
    run_mad(question, roles, uniform_assignment(roles, "solo", "q3"), *gateway, config);
    FAIL("expected AnswerExtractionFailure");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::AnswerExtractionFailure);
  }
  // aff + neg + judge + judge re-ask
  CHECK(gateway->call_counts().at("solo").network_calls == 4);
}

TEST_CASE("judge can ask for more rounds before deciding") {
  RoleSet roles = mad_role_set();
  Question question = testutil::make_question("q4", 4, 'B');
  ScriptedAgentProgram program;
  program.agent_id = "solo";
  // Round 2 affirmative turns mention the negative side's argument.
  program.rules = {
      {{"You are the moderator judge", "A refined viewpoint"}, "Now it is clear. Answer: B"},
      {{"You are the moderator judge"}, "CONTINUE"},
      {{"defend or revise"}, "A refined viewpoint after the negative side spoke."},
  };
  program.default_response = "viewpoints";
  auto gateway = gateway_for({{"solo", program}});

  EngineConfig config = EngineConfig::defaults(Framework::mad);
  Transcript transcript =
      run_mad(question, roles, uniform_assignment(roles, "solo", "q4"), *gateway, config);
  CHECK(transcript.verdict.final_answer == 'B');
  CHECK(transcript.verdict.terminated_early);  // decided at round 2 of 3
  CHECK(transcript.turns.size() == 6);
  CHECK(transcript.turns.back().round == 2);
}

TEST_CASE("early_stop=false keeps the judge silent until the last round") {
  RoleSet roles = mad_role_set();
  Question question = testutil::make_question("q5", 4, 'A');
  std::map<std::string, ScriptedAgentProgram> programs;
  ScriptedAgentProgram debater;
  debater.agent_id = "deb";
  debater.default_response = "viewpoints";
  programs["deb"] = debater;
  ScriptedAgentProgram judge;
  judge.agent_id = "jud";
  judge.rules = {{{"You are the moderator judge"}, "Answer: A"}};
  programs["jud"] = judge;
  auto gateway = gateway_for(programs);

  Assignment assignment;
  assignment.question_id = "q5";
  assignment.mapping = {{"affirmative", "deb"}, {"negative", "deb"}, {"judge", "jud"}};
  EngineConfig config = EngineConfig::defaults(Framework::mad);
  config.early_stop = false;
  Transcript transcript = run_mad(question, roles, assignment, *gateway, config);
  CHECK(gateway->call_counts().at("jud").network_calls == 1);  // only the forced turn
  CHECK(transcript.verdict.final_answer == 'A');
  CHECK_FALSE(transcript.verdict.terminated_early);
  CHECK(transcript.turns.size() == 7);  // 3 rounds x (aff+neg) + 1 judge
}

// ---------------------------------------------------------------------------
// DMAD

TEST_CASE("dmad stops early on round-1 unanimity") {
  RoleSet roles = dmad_text_role_set();
  Question question = testutil::make_question("q6", 4, 'B');
  ScriptedAgentProgram program;
  program.agent_id = "solo";
  program.default_response = "Working through it. Answer: B";
  auto gateway = gateway_for({{"solo", program}});

  Transcript transcript = run_dmad(question, roles, uniform_assignment(roles, "solo", "q6"),
                                   *gateway, EngineConfig::defaults(Framework::dmad));
  CHECK(transcript.verdict.final_answer == 'B');
  CHECK(transcript.verdict.terminated_early);
  CHECK(transcript.turns.size() == 3);  // one solve turn per role
}

TEST_CASE("dmad majority vote and ordinal-1 tie-break") {
  RoleSet roles = dmad_text_role_set();
  Question question = testutil::make_question("q7", 4, 'B');

  auto make_solver = [](const std::string& id, const std::string& marker, char r1, char r2) {
    ScriptedAgentProgram program;
    program.agent_id = id;
    program.rules = {
        {{"Here are the current solutions"}, std::string("Revised. Answer: ") + r2},
        {{marker}, std::string("Solo solve. Answer: ") + r1},
    };
    return program;
  };

  SUBCASE("2-1 split resolves to the majority") {
    std::map<std::string, ScriptedAgentProgram> programs;
    programs["x"] = make_solver("x", "step by step", 'B', 'B');
    programs["y"] = make_solver("y", "step back", 'B', 'B');
    programs["z"] = make_solver("z", "program-style", 'C', 'C');
    auto gateway = gateway_for(programs);
    Assignment assignment;
    assignment.question_id = "q7";
    assignment.mapping = {{"cot", "x"}, {"sbp", "y"}, {"pot", "z"}};
    Transcript transcript =
        run_dmad(question, roles, assignment, *gateway, EngineConfig::defaults(Framework::dmad));
    CHECK(transcript.verdict.final_answer == 'B');
    CHECK_FALSE(transcript.verdict.terminated_early);
    CHECK(transcript.turns.size() == 6);  // two full rounds, no unanimity
  }

  SUBCASE("three-way tie goes to the ordinal-1 role") {
    std::map<std::string, ScriptedAgentProgram> programs;
    programs["x"] = make_solver("x", "step by step", 'A', 'A');
    programs["y"] = make_solver("y", "step back", 'B', 'B');
    programs["z"] = make_solver("z", "program-style", 'C', 'C');
    auto gateway = gateway_for(programs);
    Assignment assignment;
    assignment.question_id = "q7";
    assignment.mapping = {{"cot", "x"}, {"sbp", "y"}, {"pot", "z"}};
    Transcript transcript =
        run_dmad(question, roles, assignment, *gateway, EngineConfig::defaults(Framework::dmad));
    CHECK(transcript.verdict.final_answer == 'A');  // cot is ordinal 1
  }
}

TEST_CASE("dmad re-asks an unparseable role once, then fails extraction") {
  RoleSet roles = dmad_text_role_set();
  Question question = testutil::make_question("q8", 4, 'A');
  ScriptedAgentProgram program;
  program.agent_id = "solo";
  program.default_response = "thoughts without an answer";
  auto gateway = gateway_for({{"solo", program}});
  try {
    run_dmad(question, roles, uniform_assignment(roles, "solo", "q8"), *gateway,
             EngineConfig::defaults(Framework::dmad));
    FAIL("expected AnswerExtractionFailure");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::AnswerExtractionFailure);
  }
  CHECK(gateway->call_counts().at("solo").network_calls == 2);  // solve + one re-ask
}

TEST_CASE("run_debate rejects assignments that do not cover the role set") {
  RoleSet roles = mad_role_set();
  Question question = testutil::make_question("q9", 4, 'A');
  ScriptedAgentProgram program;
  program.agent_id = "solo";
  auto gateway = gateway_for({{"solo", program}});
  Assignment partial;
  partial.question_id = "q9";
  partial.mapping = {{"affirmative", "solo"}};
  CHECK_THROWS_AS(
      run_debate(question, roles, partial, *gateway, EngineConfig::defaults(Framework::mad)),
      Error);
}

TEST_CASE("termination bound holds even for chatty configurations") {
  RoleSet roles = mad_role_set();
  Question question = testutil::make_question("q10", 4, 'A');
  ScriptedAgentProgram program;
  program.agent_id = "solo";
  program.rules = {{{"You must now decide"}, "Fine. Answer: A"},
                   {{"You are the moderator judge"}, "CONTINUE"}};
  program.default_response = "more viewpoints";
  auto gateway = gateway_for({{"solo", program}});

  EngineConfig config = EngineConfig::defaults(Framework::mad);
  config.max_rounds = 5;
  Transcript transcript =
      run_mad(question, roles, uniform_assignment(roles, "solo", "q10"), *gateway, config);
  CHECK(transcript.turns.size() <=
        static_cast<std::size_t>(config.max_rounds * static_cast<int>(roles.size()) + 2));
  CHECK(transcript.verdict.final_answer == 'A');
  CHECK_FALSE(transcript.verdict.terminated_early);
}

TEST_CASE("round-1 affirmative debate prompt is the uniform proposal prompt") {
  RoleSet roles = mad_role_set();
  Question question = testutil::make_question("q11", 2, 'A');
  CHECK(prompts::mad_affirmative_prompt(question, roles.at("affirmative"), "", 1) ==
        prompts::proposal_prompt(question, roles.at("affirmative")));
}
