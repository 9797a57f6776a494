#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sno/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Space net optimization benchmark harness"};
    app.require_subcommand(1);

    sno::ExperimentSpec spec;
    std::string config_path;
    long long fes_max_flag = 0;

    CLI::App* run = app.add_subcommand("run", "Run seeded trials and write result files");
    run->add_option("--problem", spec.problems, "Problem name(s): " + [] {
                        std::string names;
                        for (const auto& n : sno::problem_names()) {
                            names += names.empty() ? n : ", " + n;
                        }
                        return names;
                    }())
        ->required()
        ->delimiter(',');
    run->add_option("--dim", spec.dimensions, "Problem dimension(s)")
        ->required()
        ->delimiter(',');
    run->add_option("--trials", spec.trials, "Trials per problem/dimension cell");
    run->add_option("--seed", spec.seed_base, "Base seed; trial i uses seed + i");
    auto* fes_opt = run->add_option("--fes-max", fes_max_flag,
                                    "Evaluation budget (default 200000, 1000000 from 20-D)");
    run->add_option("--out", spec.out_dir, "Output directory");
    run->add_option("--snapshots", spec.snapshots, "Net snapshot checkpoints in evaluations")
        ->delimiter(',');
    run->add_option("--config", config_path, "key = value overrides for the optimizer config");
    run->add_option("--jobs", spec.jobs, "Concurrent trials");

    sno::CompareOptions compare_options;
    std::string mode = "avg";
    std::string test_kind = "rank-sum";
    CLI::App* compare =
        app.add_subcommand("compare", "Rank and Wilcoxon-compare result directories");
    compare->add_option("dirs", compare_options.result_dirs, "Result directories (one algorithm each)")
        ->required()
        ->expected(-2);
    compare->add_option("--mode", mode, "Rank mode for the console summary: avg|best")
        ->check(CLI::IsMember({"avg", "best"}));
    compare->add_option("--alpha", compare_options.significance, "Significance level");
    compare->add_option("--wilcoxon", test_kind, "rank-sum (independent) or signed-rank (seed-paired)")
        ->check(CLI::IsMember({"rank-sum", "signed-rank"}));
    compare->add_option("--out", compare_options.out_dir, "Directory for ranks.csv / wilcoxon.csv");

    std::string snapshot_path;
    CLI::App* plotdata =
        app.add_subcommand("snapshot-plotdata", "Re-emit a net snapshot as plot columns");
    plotdata->add_option("file", snapshot_path, "net_*.csv snapshot file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (run->parsed()) {
        try {
            if (!config_path.empty()) {
                sno::apply_config_file(config_path, spec);
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        if (fes_opt->count() > 0) {
            spec.fes_max = fes_max_flag;
        }
        return sno::run_experiment(spec, std::cout, std::cerr);
    }
    if (compare->parsed()) {
        compare_options.console_mode = mode == "best" ? sno::RankMode::Best : sno::RankMode::Avg;
        compare_options.paired = test_kind == "signed-rank";
        return sno::run_compare(compare_options, std::cout, std::cerr);
    }
    return sno::write_snapshot_plotdata(snapshot_path, std::cout, std::cerr);
}
