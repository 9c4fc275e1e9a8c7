#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metadebate/digest.hpp"
#include "metadebate/errors.hpp"
#include "metadebate/gateway.hpp"
#include "metadebate/prompts.hpp"
#include "metadebate/types.hpp"

namespace metadebate {

namespace detail {

inline Criterion accuracy_criterion() {
  return Criterion{
      "Accuracy",
      "The response demonstrates correct application of fundamental principles, proper use of "
      "formulas/equations, and arrives at the right answer through valid reasoning steps without "
      "mathematical or conceptual errors."};
}

inline Criterion technical_depth_criterion() {
  return Criterion{
      "Technical Depth",
      "The response shows genuine understanding of underlying mechanisms and theory, providing "
      "substantive analysis that goes beyond surface-level observations to address the core "
      "scientific concepts involved."};
}

}  // namespace detail

// Stock rubric per role, used when no drafter agent is configured. Pure: same
// inputs, same output, no backend calls.
inline CriteriaSet builtin_criteria(Framework framework, const std::string& role_id) {
  CriteriaSet set;
  set.role_id = role_id;
  if (framework == Framework::mad) {
    if (role_id == "affirmative") {
      set.criteria = {detail::accuracy_criterion(), detail::technical_depth_criterion()};
    } else if (role_id == "negative") {
      set.criteria = {
          detail::accuracy_criterion(),
          Criterion{"Critical Divergence",
                    "The response challenges the affirmative position with a distinct perspective, "
                    "identifying concrete flaws or offering a competing line of reasoning; a "
                    "response that merely agrees with the affirmative side fails the Negative "
                    "function."}};
    } else if (role_id == "judge") {
      set.criteria = {
          detail::accuracy_criterion(),
          Criterion{"Judicial Balance",
                    "The response weighs both sides' arguments impartially, identifies which case "
                    "is stronger, and commits to a clear final answer grounded in that assessment."}};
    } else {
      throw Error(Errc::UnknownRole, "no builtin criteria for mad role '" + role_id + "'");
    }
    return validate_criteria_set(std::move(set));
  }

  static const std::map<std::string, Criterion> dmad_second = {
      {"cot", Criterion{"Stepwise Rigor",
                        "The response advances in explicit, checkable steps in which each "
                        "intermediate conclusion follows from the previous one without gaps."}},
      {"sbp", Criterion{"Principle Grounding",
                        "The response first identifies the general principle behind the question "
                        "and then applies it correctly to the specific case."}},
      {"pot", Criterion{"Procedural Precision",
                        "The response lays out a program-style derivation whose operations are "
                        "well-defined and whose final result matches the stated answer."}},
      {"io", Criterion{"Directness",
                       "The response commits to an answer supported by the input itself, without "
                       "inventing unsupported intermediate claims."}},
      {"ccot", Criterion{"Compositional Coverage",
                         "The response accounts for the relevant elements of the scene and their "
                         "relationships before reasoning to the answer."}},
      {"ddcot", Criterion{"Duty Separation",
                          "The response cleanly separates perception observations from reasoning "
                          "steps and combines them coherently into the final answer."}}};
  auto it = dmad_second.find(role_id);
  if (it == dmad_second.end())
    throw Error(Errc::UnknownRole, "no builtin criteria for dmad role '" + role_id + "'");
  set.criteria = {detail::accuracy_criterion(), it->second};
  return validate_criteria_set(std::move(set));
}

struct CriteriaRequest {
  Framework framework = Framework::mad;
  RoleSpec role;
  std::string modality_domain;      // e.g. "text-only STEM questions"
  std::vector<Question> examples;   // 2-5 sample questions
  std::string drafter;              // registered agent id
};

// Parses drafter output into (name, description) pairs. Accepts numbered or
// bulleted lines with a "Name - explanation" or "Name: explanation" shape;
// bare continuation lines extend the previous description.
inline std::vector<Criterion> parse_criteria_text(const std::string& text) {
  std::vector<Criterion> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    std::string body = line.substr(begin);

    // Strip list markers: "1.", "2)", "-", "*".
    std::size_t pos = 0;
    while (pos < body.size() && std::isdigit(static_cast<unsigned char>(body[pos]))) ++pos;
    if (pos > 0 && pos < body.size() && (body[pos] == '.' || body[pos] == ')')) {
      body = body.substr(pos + 1);
    } else if (!body.empty() && (body[0] == '-' || body[0] == '*')) {
      body = body.substr(1);
    }
    begin = body.find_first_not_of(" \t");
    body = begin == std::string::npos ? "" : body.substr(begin);
    if (body.empty()) continue;

    std::size_t sep = std::string::npos;
    std::size_t sep_len = 0;
    for (const char* token : {" - ", ": ", " – ", " — "}) {
      std::size_t found = body.find(token);
      if (found != std::string::npos && found < sep) {
        sep = found;
        sep_len = std::string(token).size();
      }
    }
    bool starts_new = false;
    std::string name, description;
    if (sep != std::string::npos) {
      name = body.substr(0, sep);
      description = body.substr(sep + sep_len);
      // Drop a trailing "(1-5)" scale mention from the name.
      std::size_t scale = name.find(" (1-5)");
      if (scale != std::string::npos) name = name.substr(0, scale);
      while (!name.empty() && name.back() == ' ') name.pop_back();
      int words = name.empty() ? 0 : 1;
      for (char c : name)
        if (c == ' ') ++words;
      starts_new = !name.empty() && name.size() <= 64 && words <= 8 && !description.empty();
    }
    if (starts_new) {
      out.push_back(Criterion{name, description});
    } else if (!out.empty()) {
      out.back().description += " " + body;
    }
  }
  return out;
}

inline bool criteria_leak_examples(const std::vector<Criterion>& criteria,
                                   const std::vector<Question>& examples) {
  for (const auto& criterion : criteria) {
    std::string text = criterion.name + " " + criterion.description;
    for (const auto& q : examples) {
      if (!q.id.empty() && text.find(q.id) != std::string::npos) return true;
      if (!q.stem.empty() && text.find(q.stem) != std::string::npos) return true;
    }
  }
  return false;
}

// File-backed cache of generated criteria, one JSON file per
// (framework, role, modality-domain) key. Generation is serialized per store.
class CriteriaStore {
 public:
  explicit CriteriaStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(Framework framework, const std::string& role_id,
                                 const std::string& modality_domain) const {
    return dir_ / (to_string(framework) + "." + role_id + "." + digest_hex(modality_domain) + ".json");
  }

  std::optional<CriteriaSet> load(Framework framework, const std::string& role_id,
                                  const std::string& modality_domain) const {
    std::ifstream in(path_for(framework, role_id, modality_domain));
    if (!in) return std::nullopt;
    try {
      json j = json::parse(in);
      CriteriaSet set;
      set.role_id = j.value("role", role_id);
      set.criteria = j.value("criteria", std::vector<Criterion>{});
      set.scale_min = j.contains("scale") ? j.at("scale").value("min", 1) : 1;
      set.scale_max = j.contains("scale") ? j.at("scale").value("max", 5) : 5;
      return validate_criteria_set(std::move(set));
    } catch (const json::exception&) {
      return std::nullopt;
    }
  }

  std::filesystem::path save(Framework framework, const std::string& role_id,
                             const std::string& modality_domain, const CriteriaSet& set,
                             const std::string& drafter) const {
    std::filesystem::create_directories(dir_);
    json j;
    j["role"] = set.role_id;
    j["criteria"] = set.criteria;
    j["scale"] = json{{"min", set.scale_min}, {"max", set.scale_max}};
    j["drafter"] = drafter;
    j["created_at"] = iso8601_now();
    std::filesystem::path path = path_for(framework, role_id, modality_domain);
    std::ofstream out(path);
    out << j.dump(2) << "\n";
    return path;
  }

  std::mutex& mutex() { return mutex_; }

 private:
  std::filesystem::path dir_;
  std::mutex mutex_;
};

// Asks the drafter agent for 2-3 role-specific criteria. Over-long lists get
// one re-ask and are then truncated to 3; leaked example text gets one re-ask
// and is then an error; unusable output after the re-ask is DrafterFailure.
inline CriteriaSet generate_criteria(const CriteriaRequest& request, const RoleSet& roles,
                                     Gateway& gateway, CriteriaStore* store = nullptr) {
  if (request.examples.size() < 2 || request.examples.size() > 5)
    throw Error(Errc::InvalidSpec, "criteria request needs 2-5 example questions");
  if (!gateway.registry().contains(request.drafter))
    throw Error(Errc::UnknownAgent, "drafter '" + request.drafter + "' is not registered");

  std::unique_lock<std::mutex> lock;
  if (store) {
    lock = std::unique_lock<std::mutex>(store->mutex());
    if (auto cached = store->load(request.framework, request.role.id, request.modality_domain))
      return *cached;
  }

  const AgentSpec& drafter = gateway.registry().at(request.drafter);
  std::string prompt =
      prompts::criteria_prompt(roles, request.role, request.modality_domain, request.examples);

  std::vector<Criterion> parsed;
  for (int attempt = 0; attempt < 2; ++attempt) {
    ChatRequest chat = make_user_request(drafter.id, prompt, drafter.params);
    if (attempt > 0)
      chat.messages.push_back(ChatMessage{ChatRole::user, prompts::criteria_reask_note(), {}});
    ChatResponse response = gateway.complete(chat);
    parsed = parse_criteria_text(response.text);

    bool leaked = criteria_leak_examples(parsed, request.examples);
    bool bad_count = parsed.size() < 2 || parsed.size() > 3;
    if (!leaked && !bad_count) break;
    if (attempt == 0) continue;  // one re-ask for either defect

    if (leaked)
      throw Error(Errc::ConstraintViolation,
                  "drafted criteria still mention the example questions after a re-ask");
    if (parsed.size() > 3) {
      parsed.resize(3);  // keep the first three
      break;
    }
    throw Error(Errc::DrafterFailure, "drafter produced " + std::to_string(parsed.size()) +
                                          " usable criteria for role '" + request.role.id + "'");
  }

  CriteriaSet set;
  set.role_id = request.role.id;
  set.criteria = std::move(parsed);
  try {
    set = validate_criteria_set(std::move(set));
  } catch (const Error& err) {
    throw Error(Errc::DrafterFailure, std::string("drafted criteria are unusable: ") + err.what());
  }

  if (store)
    store->save(request.framework, request.role.id, request.modality_domain, set, request.drafter);
  return set;
}

}  // namespace metadebate
