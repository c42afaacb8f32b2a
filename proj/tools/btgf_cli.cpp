// btgf: multi-relational graph clustering with a learned attribute filter.
//
// Subcommands: run, ablate, verify-bounds, generate, evaluate.
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "btgf/bounds.hpp"
#include "btgf/data_io.hpp"
#include "btgf/errors.hpp"
#include "btgf/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::int64_t seed = -1;  ///< -1 keeps the config's seed
};

void apply_overrides(btgf::RunConfig& cfg, const CommonOpts& opts) {
    if (!opts.out.empty()) cfg.out_dir = opts.out;
    if (opts.seed >= 0) cfg.train.seed = static_cast<std::uint64_t>(opts.seed);
}

void print_metrics(const btgf::ClusterEvaluation& ev) {
    std::cout << "ACC=" << ev.acc << " F1=" << ev.f1 << " NMI=" << ev.nmi << " ARI=" << ev.ari
              << "\n";
}

int cmd_run(const CommonOpts& opts, bool sweep, int workers) {
    btgf::RunConfig cfg = btgf::parse_run_config(opts.config);
    apply_overrides(cfg, opts);
    const btgf::MultiRelationalGraph graph = btgf::load_run_data(cfg);

    if (sweep) {
        const auto points = btgf::sweep_filter_grid(graph, cfg.train, workers);
        btgf::write_sweep_csv(points, cfg.out_dir / "sweep.csv");
        const btgf::SweepPoint best = btgf::best_sweep_point(points);
        std::cout << "sweep: best k=" << best.k << " gamma=" << best.gamma << " ("
                  << (best.by_accuracy ? "acc" : "silhouette") << "=" << best.score << ")\n";
        cfg.train.filter.kind = btgf::FilterKind::learned;
        cfg.train.filter.k = best.k;
        cfg.train.filter.gamma = best.gamma;
    }

    const btgf::RunArtifacts art = btgf::run_pipeline(graph, cfg.train);
    btgf::write_artifacts(art, cfg.out_dir);
    if (art.eval) print_metrics(*art.eval);
    std::cout << "artifacts written to " << cfg.out_dir.string() << "\n";
    return 0;
}

int cmd_ablate(const CommonOpts& opts, int seeds) {
    btgf::RunConfig cfg = btgf::parse_run_config(opts.config);
    apply_overrides(cfg, opts);
    const btgf::MultiRelationalGraph graph = btgf::load_run_data(cfg);
    const auto rows = btgf::ablate(graph, cfg.train, seeds);
    btgf::write_ablation_csv(rows, cfg.out_dir / "ablation.csv");
    std::cout << "variant,acc,f1,nmi,ari\n";
    for (const auto& r : rows)
        std::cout << r.variant << "," << r.acc << "," << r.f1 << "," << r.nmi << "," << r.ari << "\n";
    return 0;
}

int cmd_verify_bounds(std::uint64_t seed, int trials) {
    const btgf::BoundTrialReport rep = btgf::run_bound_trials(seed, trials);
    std::cout << "proposition 1 (lower bound, NSD input): " << rep.prop1_pass << "/" << rep.trials
              << " passed, min gap " << rep.min_gap_lower << "\n";
    std::cout << "proposition 2 (upper bound, PSD input): " << rep.prop2_pass << "/" << rep.trials
              << " passed, min gap " << rep.min_gap_upper << "\n";
    if (!rep.all_passed()) {
        std::cerr << "bound violation detected\n";
        return 3;
    }
    return 0;
}

int cmd_generate(const CommonOpts& opts, const std::string& name) {
    btgf::SbmConfig sbm = btgf::SbmConfig::default_fixture();
    if (!opts.config.empty()) {
        const btgf::RunConfig cfg = btgf::parse_run_config(opts.config);
        if (!cfg.sbm) throw btgf::ParameterError("generate: config has no sbm.* keys");
        sbm = *cfg.sbm;
    }
    if (opts.seed >= 0) sbm.seed = static_cast<std::uint64_t>(opts.seed);
    const fs::path dir = opts.out.empty() ? fs::path("dataset") : fs::path(opts.out);
    const btgf::MultiRelationalGraph graph = btgf::generate_sbm(sbm);
    btgf::write_dataset(graph, name, dir);
    std::cout << "dataset written: " << (dir / (name + ".manifest")).string() << "\n";
    return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path, const std::string& out) {
    const btgf::Labels pred = btgf::load_labels(pred_path);
    const btgf::Labels truth = btgf::load_labels(truth_path);
    const btgf::ClusterEvaluation ev = btgf::evaluate_clustering(pred, truth);
    print_metrics(ev);
    if (!out.empty()) btgf::export_metrics(ev, fs::path(out) / "metrics.csv");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-relational graph clustering via a learned attribute filter"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool sweep = false;
    int workers = 0;
    int seeds = 1;
    std::uint64_t vb_seed = 0;
    int vb_trials = 100;
    std::string gen_name = "sbm";
    std::string pred_path, truth_path;

    auto* run = app.add_subcommand("run", "train, cluster, evaluate and export artifacts");
    run->add_option("--config", opts.config, "run config file")->required();
    run->add_option("--seed", opts.seed, "override train.seed");
    run->add_option("--out", opts.out, "override output directory");
    run->add_flag("--sweep", sweep, "grid-search filter k and gamma first");
    run->add_option("--workers", workers, "parallel sweep workers (0 = auto)");

    auto* abl = app.add_subcommand("ablate", "compare filter kinds and loss variants");
    abl->add_option("--config", opts.config, "run config file")->required();
    abl->add_option("--seed", opts.seed, "override train.seed");
    abl->add_option("--out", opts.out, "override output directory");
    abl->add_option("--seeds", seeds, "number of consecutive seeds to average over");

    auto* vb = app.add_subcommand("verify-bounds", "randomized checks of the loss bound propositions");
    vb->add_option("--seed", vb_seed, "rng seed");
    vb->add_option("--trials", vb_trials, "number of random trials");

    auto* gen = app.add_subcommand("generate", "write a synthetic multi-view SBM dataset");
    gen->add_option("--config", opts.config, "config file with sbm.* keys (default fixture otherwise)");
    gen->add_option("--seed", opts.seed, "override sbm.seed");
    gen->add_option("--out", opts.out, "output directory");
    gen->add_option("--name", gen_name, "dataset name");

    auto* ev = app.add_subcommand("evaluate", "score a predicted labeling against ground truth");
    ev->add_option("--pred", pred_path, "predicted labels, one per line")->required();
    ev->add_option("--truth", truth_path, "true labels, one per line")->required();
    ev->add_option("--out", opts.out, "optional directory for metrics.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(opts, sweep, workers);
        if (abl->parsed()) return cmd_ablate(opts, seeds);
        if (vb->parsed()) return cmd_verify_bounds(vb_seed, vb_trials);
        if (gen->parsed()) return cmd_generate(opts, gen_name);
        if (ev->parsed()) return cmd_evaluate(pred_path, truth_path, opts.out);
    } catch (const btgf::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const btgf::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const btgf::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const btgf::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
