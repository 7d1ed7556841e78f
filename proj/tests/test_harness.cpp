// Tree scaling, stage builders, plan files, and the sweep orchestrator.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <skilltree/harness.hpp>

#include "support.hpp"

using namespace skilltree;
using Catch::Matchers::ContainsSubstring;
using testsupport::data_path;

namespace {

const std::set<std::string> kGtUnion = {"ATI",
                                        "band_ratio",
                                        "calc_batch_image_mean",
                                        "calc_batch_image_mean_mean",
                                        "calculate_batch_ndti",
                                        "calculate_threshold_ratio",
                                        "get_filelist",
                                        "mean",
                                        "split_window"};

struct Loaded {
    SkillTree tree = load_manifest(data_path("reference_tree.json"));
    std::vector<QuestionFixture> fixtures = load_fixtures(data_path("fixtures"));
};

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("ground-truth union across the bundled cases") {
    Loaded d;
    REQUIRE(gt_tool_names(d.fixtures, d.tree) == kGtUnion);
    REQUIRE(gt_tool_names({}, d.tree).empty());

    QuestionFixture bogus = d.fixtures[0];
    bogus.gt_trajectory.push_back({"not_a_tool", json::object()});
    REQUIRE_THROWS_AS(gt_tool_names({bogus}, d.tree), ConfigError);
}

TEST_CASE("the minimal library is exactly the ground truth and still suffices") {
    Loaded d;
    SkillTree minimal = extract_gt_minimal(d.tree, d.fixtures);
    REQUIRE(minimal.tools.size() == kGtUnion.size());
    for (const auto& name : kGtUnion) REQUIRE(minimal.find_tool(name) != nullptr);
    REQUIRE(minimal.nodes.size() == 3);  // index, inversion, statistics survive

    // Oracle replay completes perfectly on the smallest tree.
    for (const auto& fixture : d.fixtures) {
        auto record = testsupport::run_oracle(fixture, minimal, Paradigm::active());
        QuestionScore s = score_question(record, fixture);
        REQUIRE(s.accuracy == 1.0);
        REQUIRE(*s.efficiency == 1.0);
        REQUIRE(s.params == 1.0);
    }
}

TEST_CASE("scaled trees are seeded, validated, and size-exact") {
    Loaded d;
    auto keep = gt_tool_names(d.fixtures, d.tree);

    SkillTree zero = build_scaled_tree(d.tree, keep, 0, 3);
    REQUIRE(zero.tools.size() == keep.size());

    SkillTree a = build_scaled_tree(d.tree, keep, 20, 3);
    SkillTree b = build_scaled_tree(d.tree, keep, 20, 3);
    REQUIRE(a.tools.size() == 29);
    auto names = [](const SkillTree& t) {
        std::vector<std::string> out;
        for (const auto& tool : t.tools) out.push_back(tool.name);
        return out;
    };
    REQUIRE(names(a) == names(b));  // identical under the same seed
    REQUIRE_NOTHROW(validate_tree(a));

    SkillTree uniform = build_scaled_tree(d.tree, keep, 20, 3, SampleMode::Uniform);
    REQUIRE(uniform.tools.size() == 29);
    REQUIRE_NOTHROW(validate_tree(uniform));

    // 95 distractors exist; 96 is one too many.
    REQUIRE_NOTHROW(build_scaled_tree(d.tree, keep, 95, 0));
    REQUIRE_THROWS_WITH(build_scaled_tree(d.tree, keep, 96, 0),
                        ContainsSubstring("not enough distractor"));
}

TEST_CASE("stratified quotas follow pool proportions with caps") {
    auto q = proportional_quotas({12, 45, 3}, 20);
    REQUIRE(q.size() == 3);
    REQUIRE(q[0] + q[1] + q[2] == 20);
    REQUIRE(q[0] <= 12);
    REQUIRE(q[1] <= 45);
    REQUIRE(q[2] <= 3);
    REQUIRE(q[1] >= q[0]);  // biggest pool gets the most

    auto capped = proportional_quotas({2, 2}, 10);  // want exceeds capacity
    REQUIRE(capped == std::vector<std::size_t>{2, 2});
    REQUIRE(proportional_quotas({}, 5).empty());
}

TEST_CASE("same-domain stages sweep up to the full library") {
    Loaded d;
    auto stages = same_domain_stages(d.tree, d.fixtures, {0, 20, 40, 60, 80}, 0);
    REQUIRE(stages.size() == 6);
    std::vector<std::string> labels;
    std::vector<std::size_t> sizes;
    for (const auto& s : stages) {
        labels.push_back(s.label);
        sizes.push_back(s.tree.tools.size());
        REQUIRE_NOTHROW(validate_tree(s.tree));
    }
    REQUIRE(labels == std::vector<std::string>{"gt+0", "gt+20", "gt+40", "gt+60",
                                               "gt+80", "all"});
    REQUIRE(sizes == std::vector<std::size_t>{9, 29, 49, 69, 89, 104});
}

TEST_CASE("cross-domain stages grow cumulatively and reject collisions") {
    Loaded d;
    SkillTree stage1 = load_manifest(data_path("noise/stage1_api_services.json"));
    SkillTree stage2 = load_manifest(data_path("noise/stage2_web_services.json"));
    auto stages = cross_domain_stages(d.tree, {stage1, stage2});
    REQUIRE(stages.size() == 3);
    REQUIRE(stages[0].label == "base");
    REQUIRE(stages[0].tree.tools.size() == 104);
    REQUIRE(stages[1].tree.tools.size() == 179);
    REQUIRE(stages[2].tree.tools.size() == 234);

    // Injection never alters the base subset.
    for (const auto& tool : d.tree.tools) {
        const ToolSpec* merged = stages[2].tree.find_tool(tool.name);
        REQUIRE(merged != nullptr);
        REQUIRE(merged->brief == tool.brief);
        REQUIRE(merged->document == tool.document);
        REQUIRE(merged->kit_id == tool.kit_id);
    }

    SkillTree colliding = stage1;
    colliding.nodes[0].member_tools[0] = "ATI";
    colliding.tools[0].name = "ATI";
    REQUIRE_THROWS_AS(merge_trees(d.tree, colliding), ValidationError);
}

TEST_CASE("plan files parse with path resolution and sanity checks") {
    ScalingPlan same = load_scaling_plan(data_path("plans/same_domain.json"));
    REQUIRE(same.mode == ScalingMode::SameDomain);
    REQUIRE(same.increments == std::vector<std::size_t>{0, 20, 40, 60, 80});
    REQUIRE(same.paradigms == std::vector<std::string>{"flat", "active"});

    ScalingPlan cross = load_scaling_plan(data_path("plans/cross_domain.json"));
    REQUIRE(cross.mode == ScalingMode::CrossDomain);
    REQUIRE(cross.stage_manifests.size() == 2);
    for (const auto& p : cross.stage_manifests)
        REQUIRE(std::filesystem::exists(p));  // relative paths resolved to the plan dir

    REQUIRE_THROWS_AS(parse_scaling_plan(json{{"mode", "sideways"}}, "."), ParseError);
    json unordered{{"mode", "same_domain"},
                   {"increments", json::array({0, 20, 10})},
                   {"paradigms", json::array({"flat"})}};
    REQUIRE_THROWS_WITH(parse_scaling_plan(unordered, "."),
                        ContainsSubstring("strictly increasing"));
    json no_paradigms{{"mode", "same_domain"}, {"increments", json::array({0})}};
    REQUIRE_THROWS_AS(parse_scaling_plan(no_paradigms, "."), ParseError);
}

TEST_CASE("paradigm specs cover the ablations") {
    REQUIRE(parse_paradigm_spec("active").paradigm.kind == ParadigmKind::Active);
    REQUIRE(parse_paradigm_spec("flat").paradigm.kind == ParadigmKind::Flat);
    REQUIRE(parse_paradigm_spec("rag").paradigm.kind == ParadigmKind::Rag);
    REQUIRE(parse_paradigm_spec("2layers").paradigm.kind == ParadigmKind::TwoLayers);
    auto random = parse_paradigm_spec("random:7");
    REQUIRE(random.paradigm.kind == ParadigmKind::Active);
    REQUIRE(random.regroup_seed == 7);
    REQUIRE(random.label == "random:7");
    REQUIRE_THROWS_AS(parse_paradigm_spec("bogus"), ConfigError);
    REQUIRE_THROWS_AS(parse_paradigm_spec("random:goose"), ConfigError);
}

TEST_CASE("the sweep writes one report per cell plus the curve file") {
    SkillTree tree = testsupport::make_synthetic_tree(8);
    QuestionFixture fixture = testsupport::make_synthetic_fixture();

    ScalingPlan plan;
    plan.mode = ScalingMode::SameDomain;
    plan.increments = {0, 2};
    plan.seed = 1;
    plan.paradigms = {"flat", "active"};

    namespace fs = std::filesystem;
    fs::path out = fs::temp_directory_path() / "skilltree_harness_test";
    fs::remove_all(out);

    OraclePolicy policy;
    MatrixOptions opts;
    opts.out_dir = out.string();
    auto cells = run_matrix(plan, tree, {fixture}, policy, opts);

    REQUIRE(cells.size() == 6);  // 3 stages x 2 paradigms
    REQUIRE(cells[0].stage == "gt+0");
    REQUIRE(cells[0].tree_size == 2);
    REQUIRE(cells[4].stage == "all");
    REQUIRE(cells[4].tree_size == 8);
    for (const auto& cell : cells) {
        REQUIRE(cell.report.mean_accuracy == 1.0);
        REQUIRE(cell.report.mean_tem == 1.0);
    }

    REQUIRE(fs::exists(out / "reports" / "gt+0_flat.json"));
    REQUIRE(fs::exists(out / "trajectories" / "all_active.jsonl"));
    std::string csv = read_file(out / "curves.csv");
    REQUIRE_THAT(csv, ContainsSubstring(
                          "stage,tree_size,paradigm,accuracy,tokens_per_question,"
                          "tokens_per_turn\n"));
    REQUIRE_THAT(csv, ContainsSubstring("gt+2,4,active,"));
    fs::remove_all(out);
}
