#pragma once

// Episode runner: the policy/engine/environment closed loop. Every policy
// invocation is one turn; the tokens of the fully rendered message context at
// decision time are charged to that turn. The loop stops on Answer or when the
// turn budget runs out; a policy failure marks the episode failed and keeps
// the partial trajectory.

#include <optional>
#include <string>
#include <vector>

#include "skilltree/engine.hpp"
#include "skilltree/environment.hpp"
#include "skilltree/policy.hpp"
#include "skilltree/prompts.hpp"
#include "skilltree/tokens.hpp"

namespace skilltree {

struct RunLimits {
    int max_turns = 32;
};

struct EpisodeConfig {
    Paradigm paradigm = Paradigm::active();
    RunLimits limits;
    std::string system_template;     // empty -> paradigm default
    Tokenizer tokenizer;             // empty -> builtin
    bool provider_tokens = false;    // prefer policy-reported counts
    std::optional<std::vector<std::string>> retrieved;  // rag only
    std::string paradigm_label;      // empty -> paradigm.label()
};

inline TrajectoryRecord run_episode(const QuestionFixture& fixture, const SkillTree& tree,
                                    Policy& policy, const EpisodeConfig& cfg) {
    const std::string tmpl =
        cfg.system_template.empty() ? default_template(cfg.paradigm) : cfg.system_template;
    const Tokenizer tok = cfg.tokenizer ? cfg.tokenizer : builtin_tokenizer();

    DecisionState state = init_state(fixture, tree, cfg.paradigm, cfg.retrieved);
    Environment env(fixture);

    TrajectoryRecord record;
    record.question_id = fixture.question_id;
    record.paradigm = cfg.paradigm_label.empty() ? cfg.paradigm.label() : cfg.paradigm_label;

    for (int turn = 0; turn < cfg.limits.max_turns && !state.terminated; ++turn) {
        std::int64_t input_tokens = message_tokens(render_messages(state, tmpl), tok);
        PolicyDecision decision;
        try {
            decision = policy.decide(state, fixture, tree);
        } catch (const std::exception& e) {
            record.error = e.what();
            break;
        }
        if (cfg.provider_tokens && decision.reported_input_tokens)
            input_tokens = *decision.reported_input_tokens;
        Observation obs = step(state, decision.action, env, tree);
        record.turns.push_back({decision.action.to_json(), obs.kind,
                                static_cast<std::int64_t>(obs.payload.size()),
                                input_tokens});
    }
    record.calls = state.calls;
    record.terminated = state.terminated;
    if (state.terminated) record.answer = state.answer;
    return record;
}

}  // namespace skilltree
