#pragma once

// System prompt templates and deterministic chat-message rendering. The
// progressive template carries a {kit_table} placeholder that receives the
// initial context block; the baseline template has no navigation content, so
// document context is appended after it. Rendering is pure: the same state
// always yields byte-identical messages.

#include <string>
#include <string_view>
#include <vector>

#include "skilltree/engine.hpp"
#include "skilltree/errors.hpp"

namespace skilltree {

inline constexpr std::string_view kActiveSystemTemplate =
    R"(You are a geoscientist, and you need to use tools to answer multiple-choice questions about Earth observation data analysis. Note that if a tool returns an error, you can only try again once. Ultimately, you only need to explicitly tell me the correct choice.

ATTENTION:
1. When a tool returns "Result saved at /path/to/file", you must use the full returned path "/path/to/file" in all subsequent tool calls.
2. For each question, you must provide the choice you think is most appropriate. Your final answer format must be: <Answer>Your choice<Answer>
3. You have access to EO tools via a 4-meta-tool progressive disclosure interface: skill, doc, call, filelist. You MUST follow the strict order: skill -> doc -> call. Skipping any step is forbidden. If a tool call returns an error, re-read the doc output carefully and fix the parameters. Only retry once -- if it fails again, try a different tool or approach. For doc and call, use tool_id in 'kit.tool_name' format, e.g. 'statistics.calc_batch_image_mean'. For call, tool_args must be a JSON string, e.g. tool_args='{"file_list": ["a.tif", "b.tif"]}' Available kits and their applicable tasks:
{kit_table})";

inline constexpr std::string_view kBaselineSystemTemplate =
    R"(You are a geoscientist, and you need to use tools to answer multiple-choice questions about Earth observation data analysis. Note that if a tool returns an error, you can only try again once. Ultimately, you only need to explicitly tell me the correct choice.

ATTENTION:
1. When a tool returns "Result saved at /path/to/file", you must use the full returned path "/path/to/file" in all subsequent tool calls.
2. For each question, you must provide the choice you think is most appropriate. Your final answer format must be: <Answer>Your choice<Answer>)";

inline constexpr std::string_view kTwoLayersSystemTemplate =
    R"(You are a geoscientist, and you need to use tools to answer multiple-choice questions about Earth observation data analysis. Note that if a tool returns an error, you can only try again once. Ultimately, you only need to explicitly tell me the correct choice.

ATTENTION:
1. When a tool returns "Result saved at /path/to/file", you must use the full returned path "/path/to/file" in all subsequent tool calls.
2. For each question, you must provide the choice you think is most appropriate. Your final answer format must be: <Answer>Your choice<Answer>
3. You have access to EO tools via a 3-meta-tool disclosure interface: doc, call, filelist. You MUST read a tool's doc before calling it: doc -> call. If a tool call returns an error, re-read the doc output carefully and fix the parameters. Only retry once -- if it fails again, try a different tool or approach. For doc and call, use tool_id in 'kit.tool_name' format, e.g. 'statistics.calc_batch_image_mean'. For call, tool_args must be a JSON string, e.g. tool_args='{"file_list": ["a.tif", "b.tif"]}' Available tools grouped by kit:
{kit_table})";

inline std::string default_template(const Paradigm& p) {
    switch (p.kind) {
        case ParadigmKind::Active: return std::string(kActiveSystemTemplate);
        case ParadigmKind::TwoLayers: return std::string(kTwoLayersSystemTemplate);
        case ParadigmKind::Flat:
        case ParadigmKind::Rag: return std::string(kBaselineSystemTemplate);
    }
    return std::string(kBaselineSystemTemplate);
}

struct Message {
    std::string role;  // system | user | assistant | tool
    std::string content;
};

// Assistant-side action text. Call arguments are serialized as a JSON string,
// matching the tool_args convention the system prompt declares.
inline std::string render_action_text(const Action& a) {
    json j = a.to_json();
    if (a.kind == ActionKind::Call) j["tool_args"] = canonical_args(a.args);
    return j.dump();
}

inline constexpr std::string_view kKitTablePlaceholder = "{kit_table}";

// message 0 = system prompt, message 1 = query, then one assistant/tool pair
// per turn. Total length is always 2 + 2 * turns.
inline std::vector<Message> render_messages(const DecisionState& s,
                                            std::string_view system_template) {
    std::string sys(system_template);
    auto pos = sys.find(kKitTablePlaceholder);
    if (s.paradigm.kind == ParadigmKind::Active && pos == std::string::npos)
        throw ConfigError("system template missing {kit_table} placeholder");
    if (pos != std::string::npos) {
        sys.replace(pos, kKitTablePlaceholder.size(), s.o0);
    } else if (!s.o0.empty()) {
        sys += "\n\nAvailable tool documents:\n" + s.o0;
    }
    std::vector<Message> msgs;
    msgs.push_back({"system", std::move(sys)});
    msgs.push_back({"user", s.query});
    for (const auto& [action, obs] : s.trajectory) {
        msgs.push_back({"assistant", render_action_text(action)});
        msgs.push_back({"tool", obs.payload});
    }
    return msgs;
}

inline std::int64_t message_tokens(const std::vector<Message>& msgs,
                                   const Tokenizer& tokenizer) {
    std::int64_t total = 0;
    for (const auto& m : msgs) total += tokenizer(m.content);
    return total;
}

}  // namespace skilltree
