// skilltree: validate tool libraries, run trajectory episodes, re-score
// recorded trajectories, and sweep scaling plans.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <skilltree/cli.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Progressive tool-exploration framework"};
    app.require_subcommand(1);

    std::string manifest;

    auto* validate = app.add_subcommand("validate", "Check a tool-library manifest");
    validate->add_option("--manifest", manifest, "Library manifest JSON")->required();

    skilltree::RunConfig run_cfg;
    auto* run = app.add_subcommand("run", "Run episodes over question fixtures");
    run->add_option("--manifest", run_cfg.manifest, "Library manifest JSON")->required();
    run->add_option("--fixtures", run_cfg.fixtures, "Fixture file or directory")->required();
    run->add_option("--paradigm", run_cfg.paradigm,
                    "active | flat | rag | 2layers | random[:<seed>]");
    run->add_option("--policy", run_cfg.policy, "oracle | scripted:<file> | remote[:<cfg>]");
    run->add_option("--out", run_cfg.out_dir, "Output directory");
    run->add_option("--max-turns", run_cfg.max_turns, "Turn budget per episode");
    run->add_option("--rag-k", run_cfg.rag_k, "Retrieved document count");
    run->add_option("--rag-force", run_cfg.rag_forced, "Tools always included by retrieval");
    run->add_option("--tokenizer", run_cfg.tokenizer, "builtin | provider");
    run->add_option("--seed", run_cfg.seed, "Seed for the random paradigm");
    run->add_option("--jobs", run_cfg.jobs, "Parallel episodes");
    run->add_flag("--embed", run_cfg.embed, "Build the retrieval index (rag)");
    run->add_option("--tem-denominator", run_cfg.tem_denominator, "gt | minlen");

    skilltree::EvalConfig eval_cfg;
    auto* eval = app.add_subcommand("eval", "Re-score a trajectories.jsonl file");
    eval->add_option("--trajectories", eval_cfg.trajectories, "JSONL from a run")->required();
    eval->add_option("--fixtures", eval_cfg.fixtures, "Fixture file or directory")->required();
    eval->add_option("--out", eval_cfg.out_dir, "Output directory");
    eval->add_option("--tem-denominator", eval_cfg.tem_denominator, "gt | minlen");

    skilltree::ScaleConfig scale_cfg;
    auto* scale = app.add_subcommand("scale", "Sweep a scaling plan");
    scale->add_option("--plan", scale_cfg.plan, "Scaling plan JSON")->required();
    scale->add_option("--manifest", scale_cfg.manifest, "Library manifest JSON")->required();
    scale->add_option("--fixtures", scale_cfg.fixtures, "Fixture file or directory")
        ->required();
    scale->add_option("--out", scale_cfg.out_dir, "Output directory");
    scale->add_option("--max-turns", scale_cfg.max_turns, "Turn budget per episode");
    scale->add_option("--tem-denominator", scale_cfg.tem_denominator, "gt | minlen");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed())
        return skilltree::guarded([&] { return skilltree::cmd_validate(manifest, std::cout); });
    if (run->parsed())
        return skilltree::guarded([&] { return skilltree::cmd_run(run_cfg, std::cout); });
    if (eval->parsed())
        return skilltree::guarded([&] { return skilltree::cmd_eval(eval_cfg, std::cout); });
    return skilltree::guarded([&] { return skilltree::cmd_scale(scale_cfg, std::cout); });
}
