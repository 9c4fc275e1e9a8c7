#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "metadebate/errors.hpp"
#include "metadebate/gateway.hpp"

namespace metadebate {

namespace detail {

inline std::string base64_encode(const std::string& bytes) {
  static const char* table = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < bytes.size()) {
    unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                 static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(table[(v >> 6) & 63]);
    out.push_back(table[v & 63]);
    i += 3;
  }
  if (i < bytes.size()) {
    unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    bool two = i + 1 < bytes.size();
    if (two) v |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(two ? table[(v >> 6) & 63] : '=');
    out.push_back('=');
  }
  return out;
}

struct SplitUrl {
  std::string host;  // scheme://host[:port]
  std::string path;  // leading path prefix, possibly empty
};

inline SplitUrl split_base_url(const std::string& base_url) {
  auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(Errc::ConfigError, "base_url '" + base_url + "' has no scheme");
  auto path_start = base_url.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string::npos) {
    out.host = base_url;
  } else {
    out.host = base_url.substr(0, path_start);
    out.path = base_url.substr(path_start);
    while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  }
  return out;
}

}  // namespace detail

// Chat-completion-style HTTP backend: POST {base_url}/chat/completions with
// an OpenAI-compatible body, response text read from
// choices[0].message.content. The API key comes from the environment variable
// named in the agent's endpoint config.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(int timeout_ms = 30000) : timeout_ms_(timeout_ms) {}

  ChatResponse invoke(const AgentSpec& agent, const ChatRequest& request) override {
    if (!agent.endpoint)
      throw Error(Errc::ConfigError, "agent '" + agent.id + "' has no http endpoint configured");
    detail::SplitUrl url = detail::split_base_url(agent.endpoint->base_url);

    httplib::Client client(url.host);
    client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
    client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);

    httplib::Headers headers;
    if (!agent.endpoint->api_key_env.empty()) {
      const char* key = std::getenv(agent.endpoint->api_key_env.c_str());
      if (!key || !*key)
        throw Error(Errc::ConfigError, "environment variable '" + agent.endpoint->api_key_env +
                                           "' for agent '" + agent.id + "' is not set");
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    std::string body = request_body(agent, request).dump();
    auto result = client.Post(url.path + "/chat/completions", headers, body, "application/json");
    if (!result) {
      auto err = result.error();
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
          err == httplib::Error::Write)
        throw Error(Errc::Timeout, "agent '" + agent.id + "': " + httplib::to_string(err));
      throw Error(Errc::BackendUnavailable, "agent '" + agent.id + "': " + httplib::to_string(err));
    }
    if (result->status != 200) {
      std::string detail = result->body.substr(0, 200);
      throw Error(Errc::BackendUnavailable,
                  "agent '" + agent.id + "': http " + std::to_string(result->status) +
                      (detail.empty() ? "" : " " + detail));
    }
    return parse_body(agent, result->body);
  }

 private:
  static json request_body(const AgentSpec& agent, const ChatRequest& request) {
    json body;
    body["model"] = agent.model_name;
    json messages = json::array();
    for (const auto& m : request.messages) {
      json msg;
      msg["role"] = m.role == ChatRole::system ? "system" : "user";
      if (m.attachments.empty()) {
        msg["content"] = m.text;
      } else {
        // Multimodal content: text part plus one base64 data URL per image.
        json parts = json::array();
        parts.push_back(json{{"type", "text"}, {"text", m.text}});
        for (const auto& a : m.attachments) {
          std::ifstream in(a.path, std::ios::binary);
          if (!in) throw Error(Errc::IoError, "cannot read attachment '" + a.path + "'");
          std::ostringstream bytes;
          bytes << in.rdbuf();
          parts.push_back(json{
              {"type", "image_url"},
              {"image_url",
               json{{"url", "data:" + a.media_type + ";base64," +
                                detail::base64_encode(bytes.str())}}}});
        }
        msg["content"] = parts;
      }
      messages.push_back(msg);
    }
    body["messages"] = messages;
    body["temperature"] = request.params.temperature;
    body["max_tokens"] = request.params.max_tokens;
    return body;
  }

  static ChatResponse parse_body(const AgentSpec& agent, const std::string& body) {
    json payload;
    try {
      payload = json::parse(body);
    } catch (const json::exception& ex) {
      throw Error(Errc::BackendUnavailable,
                  "agent '" + agent.id + "': unparseable response body: " + ex.what());
    }
    ChatResponse resp;
    if (payload.contains("choices") && payload.at("choices").is_array() &&
        !payload.at("choices").empty()) {
      const json& message = payload.at("choices").at(0).value("message", json::object());
      if (message.contains("content") && message.at("content").is_string())
        resp.text = message.at("content").get<std::string>();
    } else {
      throw Error(Errc::BackendUnavailable, "agent '" + agent.id + "': response has no choices");
    }
    if (payload.contains("usage") && payload.at("usage").is_object()) {
      TokenUsage usage;
      usage.prompt_tokens = payload.at("usage").value("prompt_tokens", 0);
      usage.completion_tokens = payload.at("usage").value("completion_tokens", 0);
      resp.token_usage = usage;
    }
    return resp;
  }

  int timeout_ms_;
};

}  // namespace metadebate
