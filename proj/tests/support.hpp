#pragma once

// Shared fixtures for the test suites: paths into the bundled data set,
// synthetic libraries with fixed per-tool text sizes, and slow reference
// implementations used as independent oracles.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <skilltree/engine.hpp>
#include <skilltree/environment.hpp>
#include <skilltree/policy.hpp>
#include <skilltree/registry.hpp>
#include <skilltree/runner.hpp>

#ifndef SKILLTREE_DATA_DIR
#error "SKILLTREE_DATA_DIR must point at the bundled data directory"
#endif

namespace testsupport {

using namespace skilltree;

inline std::string data_path(const std::string& rel) {
    return std::string(SKILLTREE_DATA_DIR) + "/" + rel;
}

inline std::string pad3(std::size_t i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%03zu", i);
    return buf;
}

// A library of n tools over four kits (round-robin membership), where every
// brief and every document have the same byte length regardless of n. That
// keeps bundled-context size exactly linear in tool count.
inline SkillTree make_synthetic_tree(std::size_t n_tools) {
    const std::vector<std::string> kit_ids = {"alpha", "beta", "gamma", "delta"};
    SkillTree tree;
    for (const auto& kit : kit_ids) {
        SkillNode node;
        node.kit_id = kit;
        node.summary = "Synthetic kit " + kit;
        node.applicable_tasks = "Synthetic tasks for kit " + kit;
        node.typical_usage = "Use kit " + kit + " in synthetic episodes";
        tree.nodes.push_back(std::move(node));
    }
    for (std::size_t i = 1; i <= n_tools; ++i) {
        ToolSpec tool;
        tool.name = "tool_" + pad3(i);
        tool.kit_id = kit_ids[(i - 1) % kit_ids.size()];
        tool.brief = "Brief for tool_" + pad3(i) + ", one synthetic op.";
        tool.document = "Document for tool_" + pad3(i) + ".\n" + std::string(1960, 'x');
        tool.params = {{"x", "number", true}};
        for (auto& node : tree.nodes)
            if (node.kit_id == tool.kit_id) node.member_tools.push_back(tool.name);
        tree.tools.push_back(std::move(tool));
    }
    std::erase_if(tree.nodes,
                  [](const SkillNode& n) { return n.member_tools.empty(); });
    validate_tree(tree);
    return tree;
}

// Fixture whose ground truth touches the first two synthetic tools.
inline QuestionFixture make_synthetic_fixture() {
    QuestionFixture q;
    q.question_id = "synthetic_q1";
    q.query = "Which option matches the synthetic computation?";
    q.choices = {"A", "B", "C", "D"};
    q.gt_answer = "A";
    q.gt_trajectory.push_back({"tool_001", json{{"x", 1}}});
    q.gt_trajectory.push_back({"tool_002", json{{"x", 2}}});
    q.initial_files = {"/ws/a.tif", "/ws/b.tif"};
    for (const char* name : {"tool_001", "tool_002"}) {
        ToolBehavior b;
        b.tool = name;
        b.args_pattern = json::object();
        b.response_template = std::string("ok from ") + name;
        q.behaviors.push_back(std::move(b));
    }
    return q;
}

// Small random library for property tests: up to 30 tools spread over a
// random subset of the four kits.
inline SkillTree random_tree(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::size_t n = 1 + rng() % 30;
    return make_synthetic_tree(n);
}

inline TrajectoryRecord run_oracle(const QuestionFixture& fixture, const SkillTree& tree,
                                   const Paradigm& paradigm,
                                   std::optional<std::vector<std::string>> retrieved =
                                       std::nullopt) {
    OraclePolicy policy;
    EpisodeConfig cfg;
    cfg.paradigm = paradigm;
    cfg.retrieved = std::move(retrieved);
    return run_episode(fixture, tree, policy, cfg);
}

// Exponential-time reference for the maximum order-preserving matching: try
// every combination of "match here / skip either side". Only for tiny inputs.
inline int brute_force_matches(const std::vector<std::string>& pred,
                               const std::vector<std::string>& gt, std::size_t i = 0,
                               std::size_t j = 0) {
    if (i >= pred.size() || j >= gt.size()) return 0;
    int best = brute_force_matches(pred, gt, i + 1, j);
    best = std::max(best, brute_force_matches(pred, gt, i, j + 1));
    if (pred[i] == gt[j])
        best = std::max(best, 1 + brute_force_matches(pred, gt, i + 1, j + 1));
    return best;
}

}  // namespace testsupport
