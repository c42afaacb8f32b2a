#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "btgf/data_io.hpp"
#include "btgf/metrics.hpp"
#include "btgf/model.hpp"

namespace btgf {

/// A full experiment description: exactly one data source (dataset manifest
/// or inline SBM), a training configuration, and an output directory.
struct RunConfig {
    std::filesystem::path manifest;  ///< empty when sbm is set
    std::optional<SbmConfig> sbm;
    TrainConfig train;
    std::filesystem::path out_dir = "out";

    void validate() const;
};

/// Parses a `key = value` config file (keys data.manifest, sbm.*, train.*,
/// filter.*, out); relative paths resolve against the config file directory.
RunConfig parse_run_config(const std::filesystem::path& path);

MultiRelationalGraph load_run_data(const RunConfig& cfg);

struct RunArtifacts {
    TrainResult result;
    std::optional<ClusterEvaluation> eval;  ///< present when the graph has labels
};

/// Trains and, when ground truth is available, evaluates.
RunArtifacts run_pipeline(const MultiRelationalGraph& graph, const TrainConfig& cfg);

/// Writes metrics.csv (if evaluated), losses.csv, bounds.csv,
/// embeddings.csv, labels.txt and checkpoint.txt under out_dir.
void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& out_dir);

struct AblationRow {
    std::string variant;
    double acc = 0.0, f1 = 0.0, nmi = 0.0, ari = 0.0;
};

/// Runs the four filter variants (learned, low_pass with k=2, mix_pass,
/// identity) and the three loss variants (full, no_fd, no_msce), averaging
/// metrics over `seeds` consecutive seeds starting at cfg.seed. The full
/// configuration is trained once per seed and reported under both the
/// "learned" and "full" rows. Requires ground-truth labels.
std::vector<AblationRow> ablate(const MultiRelationalGraph& graph, const TrainConfig& cfg,
                                int seeds = 1);

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::filesystem::path& path);

struct SweepPoint {
    int k = 0;
    double gamma = 0.0;
    double score = 0.0;      ///< ACC when labels exist, silhouette otherwise
    bool by_accuracy = true;
};

/// Grid search over k in [1..5] and gamma in {0.1, 1, 10, 100, 1000}; points
/// run in parallel up to `workers` threads (further capped by the
/// BTGF_MAX_THREADS environment variable). Returns all points; best() picks
/// the winner deterministically (highest score, ties toward smaller k then
/// smaller gamma).
std::vector<SweepPoint> sweep_filter_grid(const MultiRelationalGraph& graph,
                                          const TrainConfig& cfg, int workers = 0);
SweepPoint best_sweep_point(const std::vector<SweepPoint>& points);
void write_sweep_csv(const std::vector<SweepPoint>& points, const std::filesystem::path& path);

}  // namespace btgf
