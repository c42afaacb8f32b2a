#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "btgf/graph.hpp"
#include "btgf/metrics.hpp"
#include "btgf/model.hpp"
#include "btgf/report.hpp"
#include "btgf/types.hpp"

namespace btgf {

/// Key-value manifest describing a dataset on disk. Relation paths are
/// resolved relative to the manifest's directory.
///
/// Schema (one `key = value` per line, '#' comments):
///   name, n, V, c, relations (comma-separated edge-list paths),
///   attributes (dense CSV path), labels (optional, one id per line)
struct DatasetManifest {
    std::string name;
    Index n = 0;
    int V = 0;
    int c = 0;
    std::vector<std::filesystem::path> relations;
    std::filesystem::path attributes;
    std::filesystem::path labels;  ///< empty when absent
};

DatasetManifest read_manifest(const std::filesystem::path& path);

/// Loads the graph a manifest describes. Edge lists are 0-indexed
/// "src dst [weight]" lines, symmetrized on load; duplicate lines
/// accumulate weight.
MultiRelationalGraph load_dataset(const std::filesystem::path& manifest_path);

/// Multi-view stochastic block model used as the desk-scale fixture.
struct SbmConfig {
    std::vector<int> blocks;            ///< block sizes, each >= 1
    std::vector<double> intra;          ///< per-view within-block edge probability
    std::vector<double> inter;          ///< per-view between-block edge probability
    int f = 20;                         ///< attribute dimension
    double mean_separation = 5.0;       ///< pairwise distance between block means
    double noise = 1.0;                 ///< attribute noise scale per dimension
    std::uint64_t seed = 0;

    void validate() const;
    static SbmConfig default_fixture();  ///< 3 blocks x 50, V=2, intra 0.5/0.4, inter 0.02
};

/// Per view, independent Bernoulli edges by block pair; attributes are the
/// block mean plus Gaussian noise; labels are block ids. Deterministic per
/// seed.
MultiRelationalGraph generate_sbm(const SbmConfig& cfg);

/// Writes the graph as manifest + edge lists + attribute CSV + labels so it
/// round-trips through load_dataset.
void write_dataset(const MultiRelationalGraph& graph, const std::string& name,
                   const std::filesystem::path& dir);

// ---- exports (all floats serialized with 17 significant digits) ----

void export_embeddings(const Matrix& Z_cat, const std::filesystem::path& path);
void export_metrics(const ClusterEvaluation& ev, const std::filesystem::path& path);
void export_losses(const LossReport& history, const std::filesystem::path& path);
void export_bounds(const LossReport& history, const std::filesystem::path& path);
void export_labels(const Labels& labels, const std::filesystem::path& path);
Labels load_labels(const std::filesystem::path& path);

/// Versioned structured-text dump of a trained model (header "btgf-checkpoint 1").
void save_checkpoint(const ModelState& state, const std::filesystem::path& path);
ModelState load_checkpoint(const std::filesystem::path& path);

}  // namespace btgf
