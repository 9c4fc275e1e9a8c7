#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "metadebate/digest.hpp"
#include "metadebate/engines.hpp"
#include "metadebate/errors.hpp"
#include "metadebate/gateway.hpp"
#include "metadebate/meta_debate.hpp"
#include "metadebate/strategies.hpp"
#include "metadebate/types.hpp"

namespace metadebate {

// ---------------------------------------------------------------------------
// Dataset ingestion: one JSONL object per question,
// {id, question, choices:[string], answer?, images?:[path]}. Choice letters
// come from positions; the answer must name one of them.

inline Question question_from_record(const json& record) {
  Question q;
  q.id = record.at("id").is_string() ? record.at("id").get<std::string>()
                                     : record.at("id").dump();
  q.stem = record.at("question").get<std::string>();
  const json& choices = record.at("choices");
  if (!choices.is_array()) throw Error(Errc::ParseError, "choices must be an array");
  char letter = 'A';
  for (const auto& choice : choices) {
    q.choices.push_back(Choice{letter, choice.get<std::string>()});
    ++letter;
  }
  if (record.contains("answer") && !record.at("answer").is_null()) {
    std::string answer = record.at("answer").get<std::string>();
    if (answer.size() != 1) throw Error(Errc::ValidationError, "answer must be one letter");
    q.gold_answer = answer[0];
  }
  if (record.contains("images") && record.at("images").is_array()) {
    for (const auto& image : record.at("images")) {
      std::string path = image.get<std::string>();
      std::string media = "application/octet-stream";
      auto dot = path.rfind('.');
      if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (ext == "png") media = "image/png";
        else if (ext == "jpg" || ext == "jpeg") media = "image/jpeg";
        else if (ext == "gif") media = "image/gif";
        else if (ext == "webp") media = "image/webp";
      }
      q.attachments.push_back(Attachment{path, media});
    }
  }
  return validate_question(std::move(q));
}

inline std::vector<Question> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open dataset '" + path.string() + "'");
  std::vector<Question> questions;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& ex) {
      throw Error(Errc::ParseError,
                  "dataset line " + std::to_string(line_number) + ": " + ex.what());
    }
    try {
      questions.push_back(question_from_record(record));
    } catch (const Error& err) {
      throw Error(Errc::ValidationError,
                  "dataset line " + std::to_string(line_number) + ": " + err.what());
    } catch (const json::exception& ex) {
      throw Error(Errc::ParseError,
                  "dataset line " + std::to_string(line_number) + ": " + ex.what());
    }
  }
  if (questions.empty())
    std::cerr << "warning: dataset '" << path.string() << "' contains no questions\n";
  return questions;
}

inline std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::ostringstream bytes;
  bytes << in.rdbuf();
  return digest_hex(bytes.str());
}

inline std::string sanitize_component(const std::string& raw) {
  std::string out;
  for (char c : raw)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'
                      ? c
                      : '_');
  return out.empty() ? "_" : out;
}

// ---------------------------------------------------------------------------
// Run records

struct RunManifest {
  std::string run_id;
  std::string dataset_path;
  std::string dataset_digest;
  int n_questions = 0;
  Framework framework = Framework::mad;
  StrategySpec strategy;
  std::map<std::string, std::string> drawn_mapping;  // per_run random: the one drawn configuration
  EngineConfig engine;
  std::vector<AgentSpec> agents;
  std::vector<RoleSpec> roles;
  std::map<std::string, std::string> criteria_digests;
  std::string started_at;
  std::string finished_at;
  std::optional<std::uint64_t> seed;
};

inline void to_json(json& j, const RunManifest& m) {
  j = json{{"run_id", m.run_id},
           {"dataset", json{{"path", m.dataset_path}, {"digest", m.dataset_digest},
                            {"n_questions", m.n_questions}}},
           {"framework", to_string(m.framework)},
           {"strategy", m.strategy},
           {"engine", m.engine},
           {"agents", m.agents},
           {"roles", m.roles},
           {"criteria_digests", m.criteria_digests},
           {"started_at", m.started_at},
           {"finished_at", m.finished_at}};
  if (!m.drawn_mapping.empty()) j["strategy"]["drawn_mapping"] = m.drawn_mapping;
  if (m.seed) j["seed"] = *m.seed;
  else j["seed"] = nullptr;
}
inline void from_json(const json& j, RunManifest& m) {
  m.run_id = j.value("run_id", "");
  if (j.contains("dataset")) {
    m.dataset_path = j.at("dataset").value("path", "");
    m.dataset_digest = j.at("dataset").value("digest", "");
    m.n_questions = j.at("dataset").value("n_questions", 0);
  }
  m.framework = framework_from_string(j.value("framework", "mad"));
  if (j.contains("strategy")) {
    m.strategy = j.at("strategy").get<StrategySpec>();
    m.drawn_mapping =
        j.at("strategy").value("drawn_mapping", std::map<std::string, std::string>{});
  }
  if (j.contains("engine")) m.engine = j.at("engine").get<EngineConfig>();
  m.agents = j.value("agents", std::vector<AgentSpec>{});
  m.roles = j.value("roles", std::vector<RoleSpec>{});
  m.criteria_digests = j.value("criteria_digests", std::map<std::string, std::string>{});
  m.started_at = j.value("started_at", "");
  m.finished_at = j.value("finished_at", "");
  if (j.contains("seed") && !j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
}

struct QuestionOutcome {
  std::string question_id;
  std::optional<Transcript> transcript;
  Verdict verdict;
  std::optional<std::string> error;  // error code name for failed questions
};

struct RunResult {
  std::string run_id;
  std::vector<QuestionOutcome> outcomes;
  double accuracy = 0.0;
  int n = 0;  // accuracy denominator: questions with a known gold answer
  int extraction_failures = 0;
  int backend_failures = 0;
};

inline json result_json(const RunResult& result) {
  return json{{"run_id", result.run_id},
              {"accuracy", result.accuracy},
              {"n", result.n},
              {"failures", json{{"extraction", result.extraction_failures},
                                {"backend", result.backend_failures}}}};
}

struct BenchmarkInputs {
  std::vector<Question> questions;
  RoleSet roles;
  StrategySpec strategy;
  EngineConfig engine;
  std::map<std::string, CriteriaSet> criteria_by_role;
  std::filesystem::path run_dir;
  int concurrency = 1;
  std::string dataset_path;
  std::string dataset_digest;
};

// ---------------------------------------------------------------------------
// Benchmark execution

namespace detail {

inline Assignment assignment_for(const BenchmarkInputs& inputs, const Question& question,
                                 const Assignment* per_run_draw, Gateway& gateway,
                                 MetaDebateReport* report_out) {
  switch (inputs.strategy.kind) {
    case AssignmentKind::uniform:
      return assign_uniform(inputs.roles, gateway.registry(), inputs.strategy.uniform_agent_id,
                            question.id);
    case AssignmentKind::random_draw: {
      if (inputs.strategy.mode == RandomMode::per_run) {
        Assignment assignment = *per_run_draw;
        assignment.question_id = question.id;
        return assignment;
      }
      return assign_random(inputs.roles, gateway.registry(), inputs.strategy.seed,
                           RandomMode::per_question, question.id);
    }
    case AssignmentKind::capability_aware:
      return assign_capability_aware(question, inputs.roles, gateway.registry(),
                                     inputs.criteria_by_role, gateway, report_out);
  }
  throw Error(Errc::ConfigError, "unknown strategy kind");
}

inline void write_json_file(const std::filesystem::path& path, const json& j, int indent = 2) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path.string() + "'");
  out << j.dump(indent) << "\n";
}

}  // namespace detail

// Runs the full per-question pipeline (strategy -> debate -> verdict) over a
// dataset and persists manifest.json, transcripts.jsonl, result.json, and the
// per-question meta reports under the run directory. A failure on one
// question is recorded and counted; it never aborts the run. Output files are
// written in dataset order whatever the worker count, so runs with scripted
// agents are byte-reproducible.
inline RunResult run_benchmark(const BenchmarkInputs& inputs, Gateway& gateway) {
  if (inputs.concurrency < 1) throw Error(Errc::ConfigError, "concurrency must be >= 1");
  if (inputs.strategy.kind == AssignmentKind::uniform &&
      !gateway.registry().contains(inputs.strategy.uniform_agent_id))
    throw Error(Errc::UnknownAgent, "uniform strategy names unregistered agent '" +
                                        inputs.strategy.uniform_agent_id + "'");
  std::filesystem::create_directories(inputs.run_dir);
  if (inputs.strategy.kind == AssignmentKind::capability_aware) {
    for (const auto& role : inputs.roles.roles())
      if (!inputs.criteria_by_role.count(role.id))
        throw Error(Errc::ConfigError, "no criteria configured for role '" + role.id + "'");
    std::filesystem::create_directories(inputs.run_dir / "meta");
  }

  RunManifest manifest;
  manifest.started_at = iso8601_now();
  manifest.dataset_path = inputs.dataset_path;
  manifest.dataset_digest = inputs.dataset_digest;
  manifest.n_questions = static_cast<int>(inputs.questions.size());
  manifest.framework = inputs.roles.framework();
  manifest.strategy = inputs.strategy;
  manifest.engine = inputs.engine;
  manifest.agents = gateway.registry().agents();
  manifest.roles = inputs.roles.roles();
  if (inputs.strategy.kind == AssignmentKind::random_draw) manifest.seed = inputs.strategy.seed;
  for (const auto& [role_id, criteria] : inputs.criteria_by_role)
    manifest.criteria_digests[role_id] = digest_hex(json(criteria).dump());
  manifest.run_id = digest_hex(manifest.dataset_digest + "|" + inputs.strategy.label() + "|" +
                               manifest.started_at);

  Assignment per_run_draw;
  if (inputs.strategy.kind == AssignmentKind::random_draw &&
      inputs.strategy.mode == RandomMode::per_run) {
    per_run_draw =
        assign_random(inputs.roles, gateway.registry(), inputs.strategy.seed, RandomMode::per_run);
    manifest.drawn_mapping = per_run_draw.mapping;
  }

  std::vector<QuestionOutcome> outcomes(inputs.questions.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= inputs.questions.size()) return;
      const Question& question = inputs.questions[i];
      QuestionOutcome& outcome = outcomes[i];
      outcome.question_id = question.id;
      try {
        MetaDebateReport report;
        Assignment assignment =
            detail::assignment_for(inputs, question, &per_run_draw, gateway,
                                   inputs.strategy.kind == AssignmentKind::capability_aware
                                       ? &report
                                       : nullptr);
        if (inputs.strategy.kind == AssignmentKind::capability_aware)
          detail::write_json_file(
              inputs.run_dir / "meta" / (sanitize_component(question.id) + ".json"), json(report));
        Transcript transcript =
            run_debate(question, inputs.roles, assignment, gateway, inputs.engine);
        outcome.verdict = transcript.verdict;
        outcome.transcript = std::move(transcript);
      } catch (const Error& err) {
        outcome.error = std::string(errc_name(err.code()));
        outcome.verdict = make_verdict(std::nullopt, question.gold_answer, false);
      }
    }
  };
  if (inputs.concurrency == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < inputs.concurrency; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  // Single appender, dataset order: transcripts.jsonl is deterministic.
  std::ofstream transcripts(inputs.run_dir / "transcripts.jsonl");
  if (!transcripts)
    throw Error(Errc::IoError, "cannot write transcripts under '" + inputs.run_dir.string() + "'");
  RunResult result;
  int correct = 0;
  for (std::size_t i = 0; i < inputs.questions.size(); ++i) {
    const Question& question = inputs.questions[i];
    const QuestionOutcome& outcome = outcomes[i];
    int turn_count = 0;
    if (outcome.transcript) {
      for (const auto& turn : outcome.transcript->turns) {
        json line = turn;
        line["question_id"] = question.id;
        transcripts << line.dump() << "\n";
        ++turn_count;
      }
    }
    json verdict_line;
    verdict_line["question_id"] = question.id;
    verdict_line["verdict"] = outcome.verdict;
    verdict_line["letters"] = question.letters();
    if (question.gold_answer) verdict_line["gold_answer"] = std::string(1, *question.gold_answer);
    else verdict_line["gold_answer"] = nullptr;
    verdict_line["turns"] = turn_count;
    if (outcome.error) verdict_line["error"] = *outcome.error;
    transcripts << verdict_line.dump() << "\n";

    if (question.gold_answer) {
      ++result.n;
      if (outcome.verdict.correct && *outcome.verdict.correct) ++correct;
    }
    if (outcome.error) {
      if (*outcome.error == errc_name(Errc::AnswerExtractionFailure)) ++result.extraction_failures;
      else ++result.backend_failures;
    }
  }
  transcripts.close();

  result.run_id = manifest.run_id;
  result.outcomes = std::move(outcomes);
  result.accuracy = result.n == 0 ? 0.0 : static_cast<double>(correct) / result.n;

  manifest.finished_at = iso8601_now();
  detail::write_json_file(inputs.run_dir / "manifest.json", json(manifest));
  detail::write_json_file(inputs.run_dir / "result.json", result_json(result));
  return result;
}

// ---------------------------------------------------------------------------
// Strategy comparison

struct ComparisonRow {
  std::string label;
  StrategySpec strategy;
  double accuracy = 0.0;
  std::filesystem::path run_dir;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::optional<double> random_mean;
  std::optional<double> random_std;  // sample standard deviation over random rows
};

inline ComparisonTable compare_strategies(const BenchmarkInputs& base,
                                          const std::vector<StrategySpec>& strategies,
                                          const std::vector<std::uint64_t>& seeds,
                                          Gateway& gateway) {
  std::vector<StrategySpec> expanded;
  for (const auto& strategy : strategies) {
    if (strategy.kind == AssignmentKind::random_draw && !seeds.empty()) {
      for (std::uint64_t seed : seeds) expanded.push_back(StrategySpec::random(seed, strategy.mode));
    } else {
      expanded.push_back(strategy);
    }
  }
  if (expanded.size() < 2)
    throw Error(Errc::ConfigError, "strategy comparison needs at least two strategies");

  ComparisonTable table;
  std::vector<double> random_accuracies;
  for (const auto& strategy : expanded) {
    BenchmarkInputs inputs = base;
    inputs.strategy = strategy;
    inputs.run_dir = base.run_dir / sanitize_component(strategy.label());
    RunResult result = run_benchmark(inputs, gateway);
    table.rows.push_back(ComparisonRow{strategy.label(), strategy, result.accuracy, inputs.run_dir});
    if (strategy.kind == AssignmentKind::random_draw) random_accuracies.push_back(result.accuracy);
  }

  if (random_accuracies.size() >= 2) {
    double sum = 0.0;
    for (double a : random_accuracies) sum += a;
    double mean = sum / static_cast<double>(random_accuracies.size());
    double ss = 0.0;
    for (double a : random_accuracies) ss += (a - mean) * (a - mean);
    table.random_mean = mean;
    table.random_std = std::sqrt(ss / static_cast<double>(random_accuracies.size() - 1));
  } else if (random_accuracies.size() == 1) {
    table.random_mean = random_accuracies.front();
  }
  return table;
}

// ---------------------------------------------------------------------------
// Replay: re-derive verdicts and accuracy from the stored transcripts without
// touching any backend; disagreement with the stored files is corruption.

struct ReplayResult {
  std::string run_id;
  double accuracy = 0.0;
  int n = 0;
  int questions = 0;
};

namespace detail {

struct StoredQuestion {
  std::string question_id;
  std::vector<Turn> turns;
  json verdict_line;
};

inline std::optional<char> recompute_answer(const StoredQuestion& stored, const RunManifest& manifest) {
  std::string letters = stored.verdict_line.value("letters", "");
  if (stored.turns.empty()) return std::nullopt;
  if (manifest.framework == Framework::mad) {
    for (auto it = stored.turns.rbegin(); it != stored.turns.rend(); ++it)
      if (it->role_id == "judge") return extract_answer(it->content, letters);
    return std::nullopt;
  }
  // DMAD: last turn per role in the final round, majority with ordinal-1 ties.
  int last_round = 0;
  for (const auto& turn : stored.turns) last_round = std::max(last_round, turn.round);
  std::map<std::string, std::optional<char>> per_role;
  for (const auto& turn : stored.turns)
    if (turn.round == last_round) per_role[turn.role_id] = extract_answer(turn.content, letters);
  std::vector<char> answers;
  for (const auto& role : manifest.roles) {
    auto it = per_role.find(role.id);
    if (it == per_role.end() || !it->second) return std::nullopt;
    answers.push_back(*it->second);
  }
  if (answers.empty()) return std::nullopt;
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
  return unique ? winner : answers.front();
}

}  // namespace detail

inline ReplayResult replay_run(const std::filesystem::path& run_dir) {
  std::ifstream manifest_in(run_dir / "manifest.json");
  if (!manifest_in)
    throw Error(Errc::ManifestMissing, "no manifest.json under '" + run_dir.string() + "'");
  RunManifest manifest;
  try {
    manifest = json::parse(manifest_in).get<RunManifest>();
  } catch (const json::exception& ex) {
    throw Error(Errc::CorruptRun, std::string("manifest.json unreadable: ") + ex.what());
  }

  std::ifstream result_in(run_dir / "result.json");
  if (!result_in) throw Error(Errc::CorruptRun, "result.json missing");
  json stored_result;
  try {
    stored_result = json::parse(result_in);
  } catch (const json::exception& ex) {
    throw Error(Errc::CorruptRun, std::string("result.json unreadable: ") + ex.what());
  }

  std::ifstream transcripts(run_dir / "transcripts.jsonl");
  if (!transcripts) throw Error(Errc::CorruptRun, "transcripts.jsonl missing");

  std::vector<detail::StoredQuestion> questions;
  detail::StoredQuestion current;
  std::string line;
  while (std::getline(transcripts, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json parsed;
    try {
      parsed = json::parse(line);
    } catch (const json::exception& ex) {
      throw Error(Errc::CorruptRun, std::string("transcript line unreadable: ") + ex.what());
    }
    std::string question_id = parsed.value("question_id", "");
    if (parsed.contains("verdict")) {
      current.question_id = question_id;
      current.verdict_line = parsed;
      questions.push_back(std::move(current));
      current = detail::StoredQuestion{};
    } else {
      if (!current.turns.empty() && current.question_id != question_id)
        throw Error(Errc::CorruptRun, "interleaved transcript turns for different questions");
      current.question_id = question_id;
      current.turns.push_back(parsed.get<Turn>());
    }
  }
  if (!current.turns.empty())
    throw Error(Errc::CorruptRun, "transcript ends without a verdict line");
  if (static_cast<int>(questions.size()) != manifest.n_questions)
    throw Error(Errc::CorruptRun, "transcript question count does not match the manifest");

  ReplayResult replay;
  replay.run_id = manifest.run_id;
  replay.questions = static_cast<int>(questions.size());
  int correct = 0;
  for (const auto& stored : questions) {
    int recorded_turns = stored.verdict_line.value("turns", -1);
    if (recorded_turns != static_cast<int>(stored.turns.size()))
      throw Error(Errc::CorruptRun,
                  "turn count mismatch for question '" + stored.question_id + "'");

    Verdict stored_verdict = stored.verdict_line.at("verdict").get<Verdict>();
    std::optional<char> recomputed = detail::recompute_answer(stored, manifest);
    if (recomputed != stored_verdict.final_answer)
      throw Error(Errc::CorruptRun,
                  "recomputed answer differs for question '" + stored.question_id + "'");

    std::optional<char> gold;
    if (stored.verdict_line.contains("gold_answer") && !stored.verdict_line.at("gold_answer").is_null()) {
      std::string g = stored.verdict_line.at("gold_answer").get<std::string>();
      if (g.size() == 1) gold = g[0];
    }
    Verdict recomputed_verdict = make_verdict(recomputed, gold, stored_verdict.terminated_early);
    if (recomputed_verdict.correct != stored_verdict.correct)
      throw Error(Errc::CorruptRun,
                  "recomputed correctness differs for question '" + stored.question_id + "'");
    if (gold) {
      ++replay.n;
      if (recomputed_verdict.correct && *recomputed_verdict.correct) ++correct;
    }
  }
  replay.accuracy = replay.n == 0 ? 0.0 : static_cast<double>(correct) / replay.n;

  double stored_accuracy = stored_result.value("accuracy", -1.0);
  int stored_n = stored_result.value("n", -1);
  if (stored_n != replay.n || std::abs(stored_accuracy - replay.accuracy) > 1e-12)
    throw Error(Errc::CorruptRun, "recomputed accuracy disagrees with result.json");
  return replay;
}

}  // namespace metadebate
