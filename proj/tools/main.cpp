// metadebate: capability-aware role assignment for multi-agent debate.
//
// Subcommands:
//   assign   run the meta-debate for one question and print the suitability
//            matrix and chosen assignment
//   eval     run a benchmark (or compare strategies) over a JSONL dataset
//   criteria write per-role evaluation criteria files (builtin or generated)
//   replay   recompute a past run's verdicts and accuracy from its transcripts
//
// Exit codes: 0 ok, 2 configuration error, 3 runtime/backend error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metadebate/http_backend.hpp"
#include "metadebate/metadebate.hpp"

namespace md = metadebate;
namespace fs = std::filesystem;

namespace {

int exit_code_for(md::Errc code) {
  switch (code) {
    case md::Errc::BackendUnavailable:
    case md::Errc::Timeout:
    case md::Errc::EmptyResponse:
    case md::Errc::ScoreParseFailure:
    case md::Errc::MissingProposalScore:
    case md::Errc::NoValidEvaluators:
    case md::Errc::DrafterFailure:
    case md::Errc::ConstraintViolation:
    case md::Errc::AnswerExtractionFailure:
    case md::Errc::ManifestMissing:
    case md::Errc::CorruptRun:
      return 3;
    default:
      return 2;
  }
}

struct AgentsConfig {
  md::AgentRegistry registry;
  std::map<std::string, md::ScriptedAgentProgram> programs;  // scripted agents
};

// Agent config file: {"agents":[{id, backend, model, base_url, api_key_env,
// params:{temperature,max_tokens}, program}]}. Scripted program paths are
// resolved relative to the config file.
AgentsConfig load_agents_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw md::Error(md::Errc::ConfigError, "cannot open agents file '" + path.string() + "'");
  md::json config;
  try {
    config = md::json::parse(in);
  } catch (const md::json::exception& ex) {
    throw md::Error(md::Errc::ConfigError, "agents file '" + path.string() + "': " + ex.what());
  }
  if (!config.contains("agents") || !config.at("agents").is_array())
    throw md::Error(md::Errc::ConfigError, "agents file needs an \"agents\" array");

  AgentsConfig out;
  std::vector<md::AgentSpec> agents;
  for (const auto& entry : config.at("agents")) {
    md::AgentSpec agent;
    agent.id = entry.value("id", "");
    std::string backend = entry.value("backend", "scripted");
    if (backend == "http") agent.backend = md::BackendKind::http;
    else if (backend == "scripted") agent.backend = md::BackendKind::scripted;
    else throw md::Error(md::Errc::ConfigError, "agent '" + agent.id + "': unknown backend '" + backend + "'");
    agent.model_name = entry.value("model", "");
    if (entry.contains("params")) agent.params = entry.at("params").get<md::GenParams>();
    if (agent.backend == md::BackendKind::http) {
      md::HttpEndpoint endpoint;
      endpoint.base_url = entry.value("base_url", "");
      endpoint.api_key_env = entry.value("api_key_env", "");
      if (endpoint.base_url.empty())
        throw md::Error(md::Errc::ConfigError, "http agent '" + agent.id + "' needs a base_url");
      agent.endpoint = endpoint;
    } else {
      std::string program = entry.value("program", "");
      if (program.empty())
        throw md::Error(md::Errc::ConfigError, "scripted agent '" + agent.id + "' needs a program file");
      fs::path program_path = fs::path(program);
      if (program_path.is_relative()) program_path = path.parent_path() / program_path;
      agent.program_path = program_path.string();
      try {
        out.programs[agent.id] = md::load_scripted_program(program_path);
      } catch (const md::Error& err) {
        throw md::Error(md::Errc::ConfigError, err.what());
      }
    }
    agents.push_back(std::move(agent));
  }
  out.registry = md::validate_registry(std::move(agents));
  return out;
}

std::unique_ptr<md::Gateway> build_gateway(const AgentsConfig& config,
                                           const std::optional<std::string>& cache_dir,
                                           int concurrency) {
  md::GatewayConfig gw_config;
  if (cache_dir) gw_config.cache_dir = fs::path(*cache_dir);
  gw_config.max_in_flight = std::max(concurrency, 4);
  auto gateway = std::make_unique<md::Gateway>(config.registry, gw_config);
  auto http = std::make_shared<md::HttpBackend>(gw_config.timeout_ms);
  for (const auto& agent : config.registry.agents()) {
    if (agent.backend == md::BackendKind::http) {
      gateway->set_backend(agent.id, http);
    } else {
      gateway->set_backend(agent.id,
                           std::make_shared<md::ScriptedBackend>(config.programs.at(agent.id)));
    }
  }
  return gateway;
}

md::StrategySpec parse_strategy(const std::string& text, std::uint64_t seed, md::RandomMode mode) {
  if (text.rfind("uniform:", 0) == 0) {
    std::string agent = text.substr(8);
    if (agent.empty())
      throw md::Error(md::Errc::ConfigError, "--strategy uniform needs an agent id (uniform:<id>)");
    return md::StrategySpec::uniform(agent);
  }
  if (text == "random") return md::StrategySpec::random(seed, mode);
  if (text == "meta" || text == "capability_aware") return md::StrategySpec::capability_aware();
  throw md::Error(md::Errc::ConfigError,
                  "unknown strategy '" + text + "' (expected uniform:<id>, random, or meta)");
}

std::vector<std::uint64_t> parse_seeds_csv(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::istringstream in(csv);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    try {
      seeds.push_back(std::stoull(token));
    } catch (...) {
      throw md::Error(md::Errc::ConfigError, "bad seed '" + token + "' in --seeds");
    }
  }
  return seeds;
}

std::string default_domain(md::Framework framework, bool has_images) {
  if (framework == md::Framework::mad)
    return has_images ? "vision-text scene understanding tasks" : "text-only STEM questions";
  return has_images ? "vision-text scene understanding tasks" : "text-only STEM questions";
}

// Criteria resolution for a role set. "builtin" uses the stock rubrics,
// "generate" asks the drafter agent (cached under <out>/criteria), and
// "file:PATH" loads per-role JSON files from a directory (or one combined
// JSON object file).
std::map<std::string, md::CriteriaSet> resolve_criteria(
    const std::string& source, const md::RoleSet& roles, md::Gateway& gateway,
    const fs::path& out_dir, const std::string& drafter, const std::string& domain,
    const std::vector<md::Question>& examples) {
  std::map<std::string, md::CriteriaSet> by_role;
  if (source == "builtin") {
    for (const auto& role : roles.roles())
      by_role[role.id] = md::builtin_criteria(roles.framework(), role.id);
    return by_role;
  }
  if (source == "generate") {
    if (examples.size() < 2)
      throw md::Error(md::Errc::ConfigError,
                      "--criteria generate needs a dataset with at least two questions");
    md::CriteriaStore store(out_dir / "criteria");
    for (const auto& role : roles.roles()) {
      md::CriteriaRequest request;
      request.framework = roles.framework();
      request.role = role;
      request.modality_domain = domain;
      request.examples.assign(examples.begin(),
                              examples.begin() + std::min<std::size_t>(3, examples.size()));
      request.drafter = drafter.empty() ? gateway.registry().agents().front().id : drafter;
      by_role[role.id] = md::generate_criteria(request, roles, gateway, &store);
    }
    return by_role;
  }
  if (source.rfind("file:", 0) == 0) {
    fs::path path = source.substr(5);
    auto load_one = [&](const fs::path& file) {
      std::ifstream in(file);
      if (!in) throw md::Error(md::Errc::ConfigError, "cannot open criteria file '" + file.string() + "'");
      md::json j = md::json::parse(in);
      md::CriteriaSet set;
      set.role_id = j.value("role", "");
      set.criteria = j.value("criteria", std::vector<md::Criterion>{});
      if (j.contains("scale")) {
        set.scale_min = j.at("scale").value("min", 1);
        set.scale_max = j.at("scale").value("max", 5);
      }
      by_role[set.role_id] = md::validate_criteria_set(std::move(set));
    };
    try {
      if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path))
          if (entry.path().extension() == ".json") load_one(entry.path());
      } else {
        load_one(path);
      }
    } catch (const md::json::exception& ex) {
      throw md::Error(md::Errc::ConfigError, std::string("criteria file unreadable: ") + ex.what());
    }
    for (const auto& role : roles.roles())
      if (!by_role.count(role.id))
        throw md::Error(md::Errc::ConfigError, "criteria files lack role '" + role.id + "'");
    return by_role;
  }
  throw md::Error(md::Errc::ConfigError,
                  "unknown --criteria source '" + source + "' (builtin|generate|file:PATH)");
}

bool dataset_has_images(const std::vector<md::Question>& questions) {
  for (const auto& q : questions)
    if (!q.attachments.empty()) return true;
  return false;
}

void print_matrix(std::ostream& out, const md::SuitabilityMatrix& matrix) {
  std::size_t role_width = 4;
  for (const auto& role : matrix.role_ids) role_width = std::max(role_width, role.size());
  out << std::left << std::setw(static_cast<int>(role_width) + 2) << "role";
  for (const auto& agent : matrix.agent_ids)
    out << std::right << std::setw(std::max<int>(8, static_cast<int>(agent.size()) + 2)) << agent;
  out << "\n";
  for (std::size_t r = 0; r < matrix.role_ids.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(role_width) + 2) << matrix.role_ids[r];
    for (std::size_t a = 0; a < matrix.agent_ids.size(); ++a)
      out << std::right << std::setw(std::max<int>(8, static_cast<int>(matrix.agent_ids[a].size()) + 2))
          << std::fixed << std::setprecision(3) << matrix.cells[r][a].mean;
    out << "\n";
  }
}

// Tables on stdout are printed from the serialized result files, so what you
// see is exactly what landed on disk.
void print_result_table(std::ostream& out, const std::vector<fs::path>& result_files,
                        const std::vector<std::string>& labels) {
  std::size_t label_width = 8;
  for (const auto& label : labels) label_width = std::max(label_width, label.size());
  out << std::left << std::setw(static_cast<int>(label_width) + 2) << "strategy"
      << std::right << std::setw(10) << "accuracy" << std::setw(6) << "n" << std::setw(12)
      << "extraction" << std::setw(9) << "backend" << "\n";
  for (std::size_t i = 0; i < result_files.size(); ++i) {
    std::ifstream in(result_files[i]);
    md::json result = md::json::parse(in);
    out << std::left << std::setw(static_cast<int>(label_width) + 2) << labels[i] << std::right
        << std::setw(10) << std::fixed << std::setprecision(3) << result.value("accuracy", 0.0)
        << std::setw(6) << result.value("n", 0) << std::setw(12)
        << result.at("failures").value("extraction", 0) << std::setw(9)
        << result.at("failures").value("backend", 0) << "\n";
  }
}

// ---------------------------------------------------------------------------

struct CommonFlags {
  std::string agents_file;
  std::string framework = "mad";
  std::vector<std::string> strategies;
  std::uint64_t seed = 0;
  std::string seeds_csv;
  std::string random_mode = "per_run";
  std::string dataset;
  std::string out_dir = "runs";
  int rounds = 0;
  int concurrency = 1;
  std::string cache_dir;
  std::string criteria_source = "builtin";
  std::string drafter;
  std::string domain;
};

int cmd_assign(const CommonFlags& flags, const std::string& question_file) {
  AgentsConfig config = load_agents_config(flags.agents_file);
  std::vector<md::Question> questions = md::load_dataset(question_file);
  if (questions.size() != 1)
    throw md::Error(md::Errc::ConfigError, "assign expects exactly one question, got " +
                                               std::to_string(questions.size()));
  const md::Question& question = questions.front();

  md::Framework framework = md::framework_from_string(flags.framework);
  md::RoleCatalog catalog;
  const md::RoleSet& roles = catalog.select(framework, !question.attachments.empty());

  std::optional<std::string> cache;
  if (!flags.cache_dir.empty()) cache = flags.cache_dir;
  auto gateway = build_gateway(config, cache, flags.concurrency);

  auto criteria = resolve_criteria(flags.criteria_source, roles, *gateway, flags.out_dir,
                                   flags.drafter,
                                   flags.domain.empty()
                                       ? default_domain(framework, !question.attachments.empty())
                                       : flags.domain,
                                   questions);

  md::MetaDebateReport report =
      md::run_meta_debate(question, roles, config.registry, criteria, *gateway);

  fs::path report_dir = fs::path(flags.out_dir) / "meta";
  fs::create_directories(report_dir);
  fs::path report_path = report_dir / (md::sanitize_component(question.id) + ".json");
  {
    std::ofstream out(report_path);
    out << md::json(report).dump(2) << "\n";
  }

  std::cout << "suitability matrix for question " << question.id << "\n";
  print_matrix(std::cout, report.matrix);
  std::cout << "\nassignment (capability_aware)\n";
  for (const auto& role : roles.roles())
    std::cout << "  " << role.id << " -> " << report.assignment.mapping.at(role.id) << "\n";
  if (!report.exclusions.empty()) {
    std::cout << "\nexcluded evaluators\n";
    for (const auto& exclusion : report.exclusions)
      std::cout << "  " << exclusion.evaluator_id << " (" << exclusion.role_id << "): "
                << exclusion.reason << "\n";
  }
  std::cout << "\nreport: " << report_path.string() << "\n";
  return 0;
}

int cmd_eval(const CommonFlags& flags) {
  AgentsConfig config = load_agents_config(flags.agents_file);
  if (flags.strategies.empty())
    throw md::Error(md::Errc::ConfigError, "eval needs at least one --strategy");
  std::vector<md::Question> questions = md::load_dataset(flags.dataset);

  md::Framework framework = md::framework_from_string(flags.framework);
  md::RoleCatalog catalog;
  const md::RoleSet& roles = catalog.select(framework, dataset_has_images(questions));

  md::RandomMode mode =
      flags.random_mode == "per_question" ? md::RandomMode::per_question : md::RandomMode::per_run;
  if (flags.random_mode != "per_run" && flags.random_mode != "per_question")
    throw md::Error(md::Errc::ConfigError, "--random-mode must be per_run or per_question");

  std::vector<md::StrategySpec> strategies;
  for (const auto& text : flags.strategies)
    strategies.push_back(parse_strategy(text, flags.seed, mode));
  std::vector<std::uint64_t> seeds = parse_seeds_csv(flags.seeds_csv);

  std::optional<std::string> cache;
  if (!flags.cache_dir.empty()) cache = flags.cache_dir;
  auto gateway = build_gateway(config, cache, flags.concurrency);

  bool needs_criteria = false;
  for (const auto& strategy : strategies)
    if (strategy.kind == md::AssignmentKind::capability_aware) needs_criteria = true;
  std::map<std::string, md::CriteriaSet> criteria;
  if (needs_criteria)
    criteria = resolve_criteria(flags.criteria_source, roles, *gateway, flags.out_dir,
                                flags.drafter,
                                flags.domain.empty()
                                    ? default_domain(framework, dataset_has_images(questions))
                                    : flags.domain,
                                questions);

  md::BenchmarkInputs inputs;
  inputs.questions = questions;
  inputs.roles = roles;
  inputs.engine = md::EngineConfig::defaults(framework);
  if (flags.rounds > 0) inputs.engine.max_rounds = flags.rounds;
  inputs.criteria_by_role = criteria;
  inputs.concurrency = flags.concurrency;
  inputs.dataset_path = flags.dataset;
  inputs.dataset_digest = md::file_digest(flags.dataset);

  bool single = strategies.size() == 1 &&
                (strategies.front().kind != md::AssignmentKind::random_draw || seeds.size() <= 1);
  if (single) {
    inputs.strategy = strategies.front();
    if (inputs.strategy.kind == md::AssignmentKind::random_draw && seeds.size() == 1)
      inputs.strategy.seed = seeds.front();
    inputs.run_dir = flags.out_dir;
    md::RunResult result = md::run_benchmark(inputs, *gateway);
    print_result_table(std::cout, {inputs.run_dir / "result.json"}, {inputs.strategy.label()});
    (void)result;
    return 0;
  }

  inputs.run_dir = flags.out_dir;
  md::ComparisonTable table = md::compare_strategies(inputs, strategies, seeds, *gateway);
  std::vector<fs::path> files;
  std::vector<std::string> labels;
  for (const auto& row : table.rows) {
    files.push_back(row.run_dir / "result.json");
    labels.push_back(row.label);
  }
  print_result_table(std::cout, files, labels);
  if (table.random_mean) {
    std::cout << "random mean " << std::fixed << std::setprecision(3) << *table.random_mean;
    if (table.random_std)
      std::cout << "  std " << std::fixed << std::setprecision(3) << *table.random_std;
    std::cout << "\n";
  }
  return 0;
}

int cmd_criteria(const CommonFlags& flags) {
  md::Framework framework = md::framework_from_string(flags.framework);
  md::RoleCatalog catalog;
  bool vision = false;
  std::vector<md::Question> examples;
  if (!flags.dataset.empty()) {
    examples = md::load_dataset(flags.dataset);
    vision = dataset_has_images(examples);
  }
  const md::RoleSet& roles = catalog.select(framework, vision);
  fs::path out_dir = fs::path(flags.out_dir) / "criteria";
  fs::create_directories(out_dir);

  if (flags.criteria_source == "builtin") {
    for (const auto& role : roles.roles()) {
      md::CriteriaSet set = md::builtin_criteria(framework, role.id);
      md::json j;
      j["role"] = set.role_id;
      j["criteria"] = set.criteria;
      j["scale"] = md::json{{"min", set.scale_min}, {"max", set.scale_max}};
      j["drafter"] = "builtin";
      j["created_at"] = md::iso8601_now();
      fs::path path = out_dir / (md::to_string(framework) + "." + role.id + ".builtin.json");
      std::ofstream out(path);
      out << j.dump(2) << "\n";
      std::cout << path.string() << "\n";
    }
    return 0;
  }
  if (flags.criteria_source == "generate") {
    AgentsConfig config = load_agents_config(flags.agents_file);
    if (examples.size() < 2)
      throw md::Error(md::Errc::ConfigError,
                      "--criteria generate needs --dataset with at least two questions");
    std::optional<std::string> cache;
    if (!flags.cache_dir.empty()) cache = flags.cache_dir;
    auto gateway = build_gateway(config, cache, flags.concurrency);
    md::CriteriaStore store(out_dir);
    std::string domain = flags.domain.empty() ? default_domain(framework, vision) : flags.domain;
    for (const auto& role : roles.roles()) {
      md::CriteriaRequest request;
      request.framework = framework;
      request.role = role;
      request.modality_domain = domain;
      request.examples.assign(examples.begin(),
                              examples.begin() + std::min<std::size_t>(3, examples.size()));
      request.drafter = flags.drafter.empty() ? config.registry.agents().front().id : flags.drafter;
      md::generate_criteria(request, roles, *gateway, &store);
      std::cout << store.path_for(framework, role.id, domain).string() << "\n";
    }
    return 0;
  }
  throw md::Error(md::Errc::ConfigError, "cmd criteria supports --criteria builtin|generate");
}

int cmd_replay(const std::string& run_dir) {
  md::ReplayResult replay = md::replay_run(run_dir);
  std::cout << "run " << replay.run_id << ": replayed " << replay.questions
            << " question(s), accuracy " << std::fixed << std::setprecision(3) << replay.accuracy
            << " over n=" << replay.n << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capability-aware role assignment for multi-agent debate"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string question_file;
  std::string run_dir;

  auto add_common = [&](CLI::App* cmd, bool needs_agents) {
    auto* agents = cmd->add_option("--agents", flags.agents_file, "agent config JSON");
    if (needs_agents) agents->required();
    cmd->add_option("--framework", flags.framework, "mad|dmad")->default_str("mad");
    cmd->add_option("--out", flags.out_dir, "output directory")->default_str("runs");
    cmd->add_option("--concurrency", flags.concurrency, "worker pool width");
    cmd->add_option("--cache", flags.cache_dir, "response cache directory");
    cmd->add_option("--criteria", flags.criteria_source, "builtin|generate|file:PATH")
        ->default_str("builtin");
    cmd->add_option("--drafter", flags.drafter, "drafter agent id for generated criteria");
    cmd->add_option("--domain", flags.domain, "modality/domain text for generated criteria");
  };

  CLI::App* assign = app.add_subcommand("assign", "meta-debate for one question");
  assign->add_option("question-file", question_file, "single-question JSONL file")->required();
  add_common(assign, true);

  CLI::App* eval = app.add_subcommand("eval", "run or compare strategies over a dataset");
  add_common(eval, true);
  eval->add_option("--dataset", flags.dataset, "dataset JSONL")->required();
  eval->add_option("--strategy", flags.strategies, "uniform:<id>|random|meta (repeatable)")
      ->required();
  eval->add_option("--seed", flags.seed, "seed for random strategy");
  eval->add_option("--seeds", flags.seeds_csv, "CSV of seeds, one random run per seed");
  eval->add_option("--random-mode", flags.random_mode, "per_run|per_question")
      ->default_str("per_run");
  eval->add_option("--rounds", flags.rounds, "max debate rounds");

  CLI::App* criteria = app.add_subcommand("criteria", "write per-role criteria files");
  add_common(criteria, false);
  criteria->add_option("--dataset", flags.dataset, "dataset JSONL for example questions");

  CLI::App* replay = app.add_subcommand("replay", "recompute a run from its transcripts");
  replay->add_option("run-dir", run_dir, "run directory with manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(assign)) return cmd_assign(flags, question_file);
    if (app.got_subcommand(eval)) return cmd_eval(flags);
    if (app.got_subcommand(criteria)) return cmd_criteria(flags);
    if (app.got_subcommand(replay)) return cmd_replay(run_dir);
  } catch (const md::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err.code());
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 3;
  }
  return 2;
}
