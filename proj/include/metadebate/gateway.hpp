#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "metadebate/digest.hpp"
#include "metadebate/errors.hpp"
#include "metadebate/types.hpp"

namespace metadebate {

enum class ChatRole { system, user };

struct ChatMessage {
  ChatRole role = ChatRole::user;
  std::string text;
  std::vector<Attachment> attachments;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::string agent_id;
  std::vector<ChatMessage> messages;
  GenParams params;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

inline ChatRequest make_user_request(const std::string& agent_id, const std::string& text,
                                     const GenParams& params,
                                     std::vector<Attachment> attachments = {}) {
  ChatRequest req;
  req.agent_id = agent_id;
  req.messages.push_back(ChatMessage{ChatRole::user, text, std::move(attachments)});
  req.params = params;
  return req;
}

struct ChatResponse {
  std::string text;
  std::optional<TokenUsage> token_usage;
  bool from_cache = false;
};

struct CallCounts {
  long network_calls = 0;
  long cache_hits = 0;

  friend bool operator==(const CallCounts&, const CallCounts&) = default;
};

// Content address of a request: backend identity (model name, or the scripted
// agent id), canonicalized messages, and generation parameters. Identical
// requests to the same agent always land on the same key.
inline std::string cache_key(const AgentSpec& agent, const ChatRequest& request) {
  json canon;
  canon["backend"] = agent.backend == BackendKind::http ? agent.model_name : "scripted:" + agent.id;
  json messages = json::array();
  for (const auto& m : request.messages) {
    json msg;
    msg["role"] = m.role == ChatRole::system ? "system" : "user";
    msg["text"] = m.text;
    json atts = json::array();
    for (const auto& a : m.attachments) atts.push_back(a.path + "#" + a.media_type);
    msg["attachments"] = atts;
    messages.push_back(msg);
  }
  canon["messages"] = messages;
  canon["temperature"] = request.params.temperature;
  canon["max_tokens"] = request.params.max_tokens;
  return digest_hex(canon.dump());
}

class Backend {
 public:
  virtual ~Backend() = default;
  // One attempt; throws Error(BackendUnavailable) or Error(Timeout) on failure.
  virtual ChatResponse invoke(const AgentSpec& agent, const ChatRequest& request) = 0;
};

struct GatewayConfig {
  int max_retries = 3;
  int backoff_base_ms = 250;
  int timeout_ms = 30000;
  int max_in_flight = 4;
  std::optional<std::filesystem::path> cache_dir;
  bool cache_nonzero_temperature = false;  // nonzero-temperature requests bypass the cache
};

inline std::string iso8601_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Uniform completion front door for every agent. Content-addressed response
// cache (one JSON file per key), bounded retries with exponential backoff,
// per-agent call accounting, and a cap on in-flight backend invocations.
class Gateway {
 public:
  Gateway(AgentRegistry registry, GatewayConfig config = {})
      : registry_(std::move(registry)), config_(config) {
    for (const auto& agent : registry_.agents()) counts_[agent.id] = CallCounts{};
  }

  const AgentRegistry& registry() const { return registry_; }
  const GatewayConfig& config() const { return config_; }

  void set_backend(const std::string& agent_id, std::shared_ptr<Backend> backend) {
    registry_.at(agent_id);  // throws UnknownAgent
    backends_[agent_id] = std::move(backend);
  }

  ChatResponse complete(const ChatRequest& request) {
    const AgentSpec& agent = registry_.at(request.agent_id);
    validate_request(request);

    const bool cacheable =
        config_.cache_dir &&
        (request.params.temperature == 0.0 || config_.cache_nonzero_temperature);
    std::string key;
    if (cacheable) {
      key = cache_key(agent, request);
      if (auto hit = read_cache(agent.id, key)) {
        bump(agent.id, /*network=*/false);
        return *hit;
      }
    }

    auto it = backends_.find(agent.id);
    if (it == backends_.end())
      throw Error(Errc::BackendUnavailable, "no backend wired for agent '" + agent.id + "'");

    ChatResponse response;
    int attempt = 0;
    for (;;) {
      try {
        InFlightTicket ticket(*this);
        bump(agent.id, /*network=*/true);
        response = it->second->invoke(agent, request);
        break;
      } catch (const Error& err) {
        if (err.code() != Errc::BackendUnavailable && err.code() != Errc::Timeout) throw;
        if (attempt >= config_.max_retries) throw;
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<long>(config_.backoff_base_ms) << attempt));
        ++attempt;
      }
    }
    response.from_cache = false;
    if (cacheable) write_cache(agent.id, key, response);
    return response;
  }

  std::map<std::string, CallCounts> call_counts() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return counts_;
  }

  long total_network_calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    long total = 0;
    for (const auto& [_, c] : counts_) total += c.network_calls;
    return total;
  }

 private:
  class InFlightTicket {
   public:
    explicit InFlightTicket(Gateway& gw) : gw_(gw) {
      std::unique_lock<std::mutex> lock(gw_.flight_mutex_);
      gw_.flight_cv_.wait(lock, [&] { return gw_.in_flight_ < gw_.config_.max_in_flight; });
      ++gw_.in_flight_;
    }
    ~InFlightTicket() {
      {
        std::lock_guard<std::mutex> lock(gw_.flight_mutex_);
        --gw_.in_flight_;
      }
      gw_.flight_cv_.notify_one();
    }

   private:
    Gateway& gw_;
  };

  static void validate_request(const ChatRequest& request) {
    if (request.messages.empty())
      throw Error(Errc::InvalidSpec, "chat request needs at least one message");
    for (const auto& m : request.messages)
      if (m.role == ChatRole::system && !m.attachments.empty())
        throw Error(Errc::InvalidSpec, "attachments are only allowed on user messages");
  }

  void bump(const std::string& agent_id, bool network) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (network) ++counts_[agent_id].network_calls;
    else ++counts_[agent_id].cache_hits;
  }

  std::filesystem::path cache_path(const std::string& agent_id, const std::string& key) const {
    return *config_.cache_dir / agent_id / (key + ".json");
  }

  std::optional<ChatResponse> read_cache(const std::string& agent_id, const std::string& key) {
    std::filesystem::path path = cache_path(agent_id, key);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
      json j = json::parse(in);
      ChatResponse resp;
      resp.text = j.value("text", "");
      if (j.contains("token_usage") && !j.at("token_usage").is_null())
        resp.token_usage = j.at("token_usage").get<TokenUsage>();
      resp.from_cache = true;
      return resp;
    } catch (const json::exception&) {
      return std::nullopt;  // unreadable entry behaves like a miss
    }
  }

  void write_cache(const std::string& agent_id, const std::string& key,
                   const ChatResponse& response) {
    std::filesystem::path dir = *config_.cache_dir / agent_id;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    json j;
    j["request_digest"] = key;
    j["text"] = response.text;
    if (response.token_usage) j["token_usage"] = *response.token_usage;
    else j["token_usage"] = nullptr;
    j["created_at"] = iso8601_now();
    std::filesystem::path tmp = dir / (key + ".tmp");
    {
      std::ofstream out(tmp);
      out << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, cache_path(agent_id, key), ec);
  }

  AgentRegistry registry_;
  GatewayConfig config_;
  std::map<std::string, std::shared_ptr<Backend>> backends_;
  mutable std::mutex mutex_;
  std::map<std::string, CallCounts> counts_;
  std::mutex flight_mutex_;
  std::condition_variable flight_cv_;
  int in_flight_ = 0;
};

}  // namespace metadebate
