#pragma once

// Remote endpoints: an embedding provider and a chat-completions policy, both
// speaking the common OpenAI-style JSON shapes. Endpoints and credentials come
// from explicit config or the LLM_ENDPOINT / EMBED_ENDPOINT / LLM_API_KEY
// environment variables. Everything here is network-dependent and outside the
// deterministic test surface.

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "skilltree/errors.hpp"
#include "skilltree/policy.hpp"
#include "skilltree/prompts.hpp"
#include "skilltree/retrieval.hpp"

namespace skilltree {

inline std::string env_or(const char* var, const std::string& fallback) {
    const char* v = std::getenv(var);
    return v && *v ? v : fallback;
}

// Splits "https://host:port/base" into client target and path prefix.
inline std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    auto scheme = endpoint.find("://");
    std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    auto slash = endpoint.find('/', host_start);
    if (slash == std::string::npos) return {endpoint, ""};
    return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

// ---------------------------------------------------------------- embeddings

class RemoteEmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(std::string endpoint = "", std::string api_key = "")
        : endpoint_(endpoint.empty() ? env_or("EMBED_ENDPOINT", "") : std::move(endpoint)),
          api_key_(api_key.empty() ? env_or("LLM_API_KEY", "") : std::move(api_key)) {
        if (endpoint_.empty())
            throw ConfigError("remote embeddings need an endpoint (EMBED_ENDPOINT)");
    }

    std::vector<std::vector<float>> embed(const std::vector<std::string>& inputs) const {
        auto [base, path] = split_endpoint(endpoint_);
        httplib::Client client(base);
        client.set_read_timeout(60, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        json body{{"input", inputs}};
        auto res = client.Post(path.empty() ? "/" : path, headers, body.dump(),
                               "application/json");
        if (!res)
            throw ConfigError("embedding endpoint unreachable: " + endpoint_);
        if (res->status != 200)
            throw ConfigError("embedding endpoint returned status " +
                              std::to_string(res->status));
        json doc = json::parse(res->body);
        std::vector<std::vector<float>> out;
        const json& rows = doc.contains("embeddings") ? doc["embeddings"] : doc.at("data");
        for (const auto& row : rows) {
            const json& vec = row.is_object() ? row.at("embedding") : row;
            out.push_back(vec.get<std::vector<float>>());
        }
        if (out.size() != inputs.size())
            throw ConfigError("embedding endpoint returned a mismatched batch");
        return out;
    }

private:
    std::string endpoint_;
    std::string api_key_;
};

// ---------------------------------------------------------------- chat policy

struct RemoteLlmConfig {
    std::string endpoint;  // empty -> LLM_ENDPOINT
    std::string model = "default";
    double temperature = 0.0;
    int timeout_seconds = 120;
    int retries = 1;  // one retry on transport or parse failure
};

inline RemoteLlmConfig parse_remote_config(const json& doc) {
    RemoteLlmConfig cfg;
    cfg.endpoint = doc.value("endpoint", "");
    cfg.model = doc.value("model", cfg.model);
    cfg.temperature = doc.value("temperature", cfg.temperature);
    cfg.timeout_seconds = doc.value("timeout_seconds", cfg.timeout_seconds);
    cfg.retries = doc.value("retries", cfg.retries);
    return cfg;
}

// Function schemas offered to the model: the meta-actions under progressive
// paradigms, or the callable tools themselves under flat paradigms.
inline json tool_schemas(const DecisionState& state, const SkillTree& tree) {
    json tools = json::array();
    auto fn = [](const std::string& name, const std::string& desc, json props,
                 json required) {
        return json{{"type", "function"},
                    {"function",
                     {{"name", name},
                      {"description", desc},
                      {"parameters",
                       {{"type", "object"},
                        {"properties", std::move(props)},
                        {"required", std::move(required)}}}}}};
    };
    const ParadigmKind kind = state.paradigm.kind;
    if (kind == ParadigmKind::Active || kind == ParadigmKind::TwoLayers) {
        if (kind == ParadigmKind::Active)
            tools.push_back(fn("skill", "Show the tool catalog of one kit.",
                               {{"kit_id", {{"type", "string"}}}}, {"kit_id"}));
        tools.push_back(fn("doc", "Show the execution document of one tool.",
                           {{"tool_id", {{"type", "string"}}}}, {"tool_id"}));
        tools.push_back(fn("call", "Invoke a tool whose document was disclosed.",
                           {{"tool_id", {{"type", "string"}}},
                            {"tool_args", {{"type", "string"}}}},
                           {"tool_id", "tool_args"}));
        tools.push_back(fn("filelist", "List workspace files under a path prefix.",
                           {{"path", {{"type", "string"}}}}, {"path"}));
        return tools;
    }
    for (const auto& t : tree.tools) {
        if (!state.callable.count(t.tool_id())) continue;
        json props = json::object();
        json required = json::array();
        for (const auto& p : t.params) {
            props[p.name] = {{"type", p.type}};
            if (p.required) required.push_back(p.name);
        }
        tools.push_back(fn(t.name, t.brief, std::move(props), std::move(required)));
    }
    return tools;
}

class RemoteLlmPolicy : public Policy {
public:
    explicit RemoteLlmPolicy(RemoteLlmConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.endpoint.empty()) cfg_.endpoint = env_or("LLM_ENDPOINT", "");
        if (cfg_.endpoint.empty())
            throw ConfigError("remote policy needs an endpoint (LLM_ENDPOINT)");
        api_key_ = env_or("LLM_API_KEY", "");
    }

    PolicyDecision decide(const DecisionState& state, const QuestionFixture&,
                          const SkillTree& tree) override {
        const std::string tmpl = default_template(state.paradigm);
        json messages = json::array();
        for (const auto& m : render_messages(state, tmpl))
            messages.push_back({{"role", m.role == "tool" ? "user" : m.role},
                                {"content", m.content}});
        json body{{"model", cfg_.model},
                  {"messages", std::move(messages)},
                  {"temperature", cfg_.temperature},
                  {"tools", tool_schemas(state, tree)}};
        std::string last_error;
        for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
            try {
                return decode(post(body));
            } catch (const std::exception& e) {
                last_error = e.what();
            }
        }
        throw std::runtime_error("remote policy failed: " + last_error);
    }

    const char* name() const override { return "remote"; }

private:
    json post(const json& body) const {
        auto [base, path] = split_endpoint(cfg_.endpoint);
        httplib::Client client(base);
        client.set_read_timeout(cfg_.timeout_seconds, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post(path.empty() ? "/v1/chat/completions" : path, headers,
                               body.dump(), "application/json");
        if (!res) throw ConfigError("llm endpoint unreachable: " + cfg_.endpoint);
        if (res->status != 200)
            throw ConfigError("llm endpoint returned status " + std::to_string(res->status));
        return json::parse(res->body);
    }

    PolicyDecision decode(const json& doc) const {
        const json& msg = doc.at("choices").at(0).at("message");
        PolicyDecision d;
        if (doc.contains("usage") && doc["usage"].contains("prompt_tokens"))
            d.reported_input_tokens = doc["usage"]["prompt_tokens"].get<std::int64_t>();
        if (msg.contains("tool_calls") && !msg["tool_calls"].empty()) {
            const json& fn = msg["tool_calls"][0]["function"];
            json payload{{"name", fn.at("name").get<std::string>()}};
            json args = fn.value("arguments", json::object());
            if (args.is_string()) args = json::parse(args.get<std::string>());
            for (auto it = args.begin(); it != args.end(); ++it) payload[it.key()] = *it;
            if (!payload.contains("arguments") && !args.empty()) payload["arguments"] = args;
            d.action = parse_action(payload.dump());
            return d;
        }
        d.action = parse_action(msg.value("content", ""));
        return d;
    }

    RemoteLlmConfig cfg_;
    std::string api_key_;
};

}  // namespace skilltree
