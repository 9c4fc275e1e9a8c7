#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>

#include "metadebate/metadebate.hpp"
#include "support.hpp"

using namespace metadebate;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

std::string cli_binary() {
  const char* env = std::getenv("METADEBATE_CLI");
  REQUIRE_MESSAGE(env != nullptr, "METADEBATE_CLI must point at the built binary");
  return env;
}

CommandResult run_cli(const std::string& args) {
  std::string command = cli_binary() + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  std::array<char, 4096> buffer;
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe))
    result.output.append(buffer.data(), n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// World fixtures on disk, shared across the CLI cases.
struct CliFixture {
  testutil::TempDir dir{"clifix"};
  testutil::SpecialistWorld world = testutil::make_specialist_world(4);
  std::filesystem::path agents;

  CliFixture() { agents = testutil::write_world_fixtures(world, dir.path()); }

  std::string dataset() const { return (dir.path() / "dataset.jsonl").string(); }
  std::string out(const std::string& tag) const { return (dir.path() / tag).string(); }
};

}  // namespace

TEST_CASE("assign prints the matrix and writes the report") {
  CliFixture fixture;
  // Single-question input file.
  std::filesystem::path one = fixture.dir.path() / "one.jsonl";
  {
    std::ifstream in(fixture.dataset());
    std::string line;
    std::getline(in, line);
    std::ofstream out(one);
    out << line << "\n";
  }

  CommandResult result = run_cli("assign " + one.string() + " --agents " +
                                 fixture.agents.string() + " --out " + fixture.out("assign"));
  CAPTURE(result.output);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("suitability matrix") != std::string::npos);
  CHECK(result.output.find("affirmative -> a1") != std::string::npos);
  CHECK(result.output.find("negative -> a2") != std::string::npos);
  CHECK(result.output.find("judge -> a3") != std::string::npos);

  std::filesystem::path report =
      std::filesystem::path(fixture.out("assign")) / "meta" / (fixture.world.questions[0].id + ".json");
  REQUIRE(std::filesystem::exists(report));
  MetaDebateReport parsed = json::parse(testutil::read_file(report));
  CHECK(parsed.assignment.mapping == fixture.world.planted);
}

TEST_CASE("assign with a missing agents file names the problem and exits 2") {
  CliFixture fixture;
  std::filesystem::path one = fixture.dir.path() / "one.jsonl";
  {
    std::ofstream out(one);
    out << R"({"id":"q1","question":"x?","choices":["a","b"],"answer":"A"})" << "\n";
  }
  CommandResult result =
      run_cli("assign " + one.string() + " --agents /nonexistent/agents.json");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("agents") != std::string::npos);
}

TEST_CASE("assign exits 3 when every reviewer is excluded") {
  CliFixture fixture;
  // Overwrite every program with one whose reviews are unparseable prose.
  for (const auto& agent : fixture.world.registry.agents()) {
    ScriptedAgentProgram program = fixture.world.programs.at(agent.id);
    program.rules.insert(program.rules.begin(),
                         ScriptedRule{{"Evaluate each agent"}, "I simply cannot say."});
    std::ofstream out(fixture.dir.path() / "programs" / (agent.id + ".json"));
    out << json(program).dump(2) << "\n";
  }
  std::filesystem::path one = fixture.dir.path() / "one.jsonl";
  {
    std::ifstream in(fixture.dataset());
    std::string line;
    std::getline(in, line);
    std::ofstream out(one);
    out << line << "\n";
  }
  CommandResult result = run_cli("assign " + one.string() + " --agents " +
                                 fixture.agents.string() + " --out " + fixture.out("assignx"));
  CHECK(result.exit_code == 3);
  CHECK(result.output.find("NoValidEvaluators") != std::string::npos);
}

TEST_CASE("eval prints the accuracy that landed in result.json") {
  CliFixture fixture;
  CommandResult result =
      run_cli("eval --agents " + fixture.agents.string() + " --dataset " + fixture.dataset() +
              " --strategy meta --out " + fixture.out("eval-meta"));
  CAPTURE(result.output);
  CHECK(result.exit_code == 0);

  json stored = json::parse(
      testutil::read_file(std::filesystem::path(fixture.out("eval-meta")) / "result.json"));
  CHECK(stored.at("accuracy") == doctest::Approx(1.0));
  CHECK(result.output.find("capability_aware") != std::string::npos);
  CHECK(result.output.find("1.000") != std::string::npos);
}

TEST_CASE("eval with --seeds expands random rows and summarizes") {
  CliFixture fixture;
  CommandResult result =
      run_cli("eval --agents " + fixture.agents.string() + " --dataset " + fixture.dataset() +
              " --strategy random --seeds 4,5,6 --out " + fixture.out("eval-rand"));
  CAPTURE(result.output);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("random:seed=4:per_run") != std::string::npos);
  CHECK(result.output.find("random:seed=5:per_run") != std::string::npos);
  CHECK(result.output.find("random:seed=6:per_run") != std::string::npos);
  CHECK(result.output.find("random mean 0.333") != std::string::npos);
  CHECK(result.output.find("std 0.577") != std::string::npos);
}

TEST_CASE("eval rejects an unregistered uniform agent with exit 2") {
  CliFixture fixture;
  CommandResult result =
      run_cli("eval --agents " + fixture.agents.string() + " --dataset " + fixture.dataset() +
              " --strategy uniform:ghost --out " + fixture.out("eval-bad"));
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("ghost") != std::string::npos);
}

TEST_CASE("criteria builtin writes the stock rubric without any backend") {
  CliFixture fixture;
  CommandResult result = run_cli("criteria --criteria builtin --framework mad --out " +
                                 fixture.out("crit"));
  CAPTURE(result.output);
  CHECK(result.exit_code == 0);

  std::filesystem::path file =
      std::filesystem::path(fixture.out("crit")) / "criteria" / "mad.affirmative.builtin.json";
  CHECK(result.output.find(file.string()) != std::string::npos);
  REQUIRE(std::filesystem::exists(file));
  json parsed = json::parse(testutil::read_file(file));
  CHECK(parsed.at("criteria").at(0).at("name") == "Accuracy");
  CHECK(parsed.at("criteria").at(1).at("name") == "Technical Depth");
  CHECK(parsed.at("drafter") == "builtin");
}

TEST_CASE("criteria generate uses the drafter agent and can fail with exit 3") {
  CliFixture fixture;

  SUBCASE("a cooperative drafter produces three-entry files") {
    ScriptedAgentProgram program = fixture.world.programs.at("a1");
    program.rules.insert(program.rules.begin(),
                         ScriptedRule{{"Draft 2 or 3 evaluation criteria"},
                                      "1. Accuracy - Lands on the right option.\n"
                                      "2. Role Fit - Argues the assigned side.\n"
                                      "3. Evidence Use - Grounds claims in the question."});
    {
      std::ofstream out(fixture.dir.path() / "programs" / "a1.json");
      out << json(program).dump(2) << "\n";
    }
    CommandResult result =
        run_cli("criteria --criteria generate --agents " + fixture.agents.string() +
                " --dataset " + fixture.dataset() + " --drafter a1 --out " + fixture.out("gen"));
    CAPTURE(result.output);
    CHECK(result.exit_code == 0);
    // Three per-role files, each with three criteria.
    int files = 0;
    for (const auto& entry :
         std::filesystem::directory_iterator(std::filesystem::path(fixture.out("gen")) / "criteria")) {
      ++files;
      json parsed = json::parse(testutil::read_file(entry.path()));
      CHECK(parsed.at("criteria").size() == 3);
      CHECK(parsed.at("drafter") == "a1");
    }
    CHECK(files == 3);
  }

  SUBCASE("a drafter that returns prose exits 3") {
    CommandResult result =
        run_cli("criteria --criteria generate --agents " + fixture.agents.string() +
                " --dataset " + fixture.dataset() + " --drafter a1 --out " + fixture.out("gen2"));
    CHECK(result.exit_code == 3);
    CHECK(result.output.find("DrafterFailure") != std::string::npos);
  }
}

TEST_CASE("replay recomputes a run and flags corruption") {
  CliFixture fixture;
  std::string out_dir = fixture.out("eval-replay");
  CommandResult eval = run_cli("eval --agents " + fixture.agents.string() + " --dataset " +
                               fixture.dataset() + " --strategy uniform:a1 --out " + out_dir);
  REQUIRE(eval.exit_code == 0);

  SUBCASE("intact run replays cleanly") {
    CommandResult result = run_cli("replay " + out_dir);
    CAPTURE(result.output);
    CHECK(result.exit_code == 0);
    json stored = json::parse(testutil::read_file(std::filesystem::path(out_dir) / "result.json"));
    char printed[16];
    std::snprintf(printed, sizeof(printed), "%.3f", stored.at("accuracy").get<double>());
    CHECK(result.output.find(printed) != std::string::npos);
  }

  SUBCASE("a deleted transcript line is reported as corruption") {
    std::filesystem::path transcripts = std::filesystem::path(out_dir) / "transcripts.jsonl";
    std::string content = testutil::read_file(transcripts);
    std::size_t first_newline = content.find('\n');
    {
      std::ofstream out(transcripts);
      out << content.substr(first_newline + 1);
    }
    CommandResult result = run_cli("replay " + out_dir);
    CHECK(result.exit_code == 3);
    CHECK(result.output.find("CorruptRun") != std::string::npos);
  }

  SUBCASE("an empty directory is missing its manifest") {
    testutil::TempDir empty("emptyrun");
    CommandResult result = run_cli("replay " + empty.path().string());
    CHECK(result.exit_code == 3);
    CHECK(result.output.find("ManifestMissing") != std::string::npos);
  }
}

TEST_CASE("uniform baselines lose to the planted capability-aware assignment") {
  CliFixture fixture;
  CommandResult result = run_cli(
      "eval --agents " + fixture.agents.string() + " --dataset " + fixture.dataset() +
      " --strategy meta --strategy uniform:a1 --strategy uniform:a2 --strategy uniform:a3" +
      " --out " + fixture.out("eval-cmp"));
  CAPTURE(result.output);
  CHECK(result.exit_code == 0);

  json meta = json::parse(testutil::read_file(
      std::filesystem::path(fixture.out("eval-cmp")) / "capability_aware" / "result.json"));
  CHECK(meta.at("accuracy") == doctest::Approx(1.0));
  for (const std::string agent : {"a1", "a2", "a3"}) {
    json uniform = json::parse(testutil::read_file(
        std::filesystem::path(fixture.out("eval-cmp")) / ("uniform_" + agent) / "result.json"));
    CHECK(uniform.at("accuracy") == doctest::Approx(0.0));
  }
}

TEST_CASE("criteria files written by the criteria command feed back into eval") {
  CliFixture fixture;
  CommandResult write = run_cli("criteria --criteria builtin --framework mad --out " +
                                fixture.out("roundtrip"));
  REQUIRE(write.exit_code == 0);
  std::string criteria_dir = (std::filesystem::path(fixture.out("roundtrip")) / "criteria").string();
  CommandResult result =
      run_cli("eval --agents " + fixture.agents.string() + " --dataset " + fixture.dataset() +
              " --strategy meta --criteria file:" + criteria_dir + " --out " +
              fixture.out("eval-file"));
  CAPTURE(result.output);
  CHECK(result.exit_code == 0);
  json stored = json::parse(
      testutil::read_file(std::filesystem::path(fixture.out("eval-file")) / "result.json"));
  CHECK(stored.at("accuracy") == doctest::Approx(1.0));
}

TEST_CASE("missing required flags exit with the config code") {
  CommandResult result = run_cli("eval --strategy meta");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("--agents") != std::string::npos);
}
