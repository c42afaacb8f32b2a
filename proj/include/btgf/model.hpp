#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "btgf/filter.hpp"
#include "btgf/graph.hpp"
#include "btgf/losses.hpp"
#include "btgf/report.hpp"
#include "btgf/types.hpp"

namespace btgf {

struct TrainConfig {
    int epochs = 400;
    double learning_rate = 1e-2;
    double weight_decay = 1e-3;
    int d = 10;                       ///< embedding dimension per view
    std::uint64_t seed = 0;
    FilterConfig filter;
    int target_refresh_interval = 1;  ///< epochs between target-distribution refreshes
    int kmeans_restarts = 10;
    bool use_fd = true;               ///< ablation switch: drop the decorrelation term
    bool use_msce = true;             ///< ablation switch: drop reconstruction (no decoder)
    bool row_normalize = false;       ///< optional l2 row normalization of the attributes

    void validate() const;
};

/// Adam first/second moment buffers for one parameter tensor.
struct AdamMoments {
    Matrix m, v;
    void init(Index rows, Index cols) {
        m = Matrix::Zero(rows, cols);
        v = Matrix::Zero(rows, cols);
    }
};

struct ModelState {
    Matrix W;        ///< f x d shared encoder
    Matrix W_de;     ///< d x f decoder
    Matrix centers;  ///< c x (V*d) cluster centers
    AdamMoments mom_W, mom_W_de, mom_centers;
    int epoch = 0;   ///< completed optimizer steps
};

struct Gradients {
    Matrix W, W_de, centers;
};

struct LossTerms {
    double fd = 0.0, msce = 0.0, clu = 0.0, total = 0.0;
};

/// Z = Xt W. No bias, no activation.
Matrix encode(const Matrix& Xt, const Matrix& W);

/// Xr = Z W_de.
Matrix decode(const Matrix& Z, const Matrix& W_de);

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs by
/// within-cluster sum of squares. Deterministic given seed. An emptied
/// cluster is re-seeded to the point farthest from its assigned center.
std::pair<Matrix, Labels> kmeans(const Matrix& Z, int c, int restarts, std::uint64_t seed);

/// Soft assignment at the given parameters (used for target refreshes).
Matrix compute_q(const std::vector<Matrix>& Xt, const Matrix& W, const Matrix& centers);

/// One full-batch evaluation: losses (with the target P held constant),
/// optionally gradients for W, W_de and the centers, plus the per-pair
/// Barlow Twins intermediates the bound trace needs.
struct StepResult {
    LossTerms loss;
    Gradients grads;
    Matrix Q;
    Matrix Z_cat;
    std::vector<Vector> col_norms;          ///< per-view embedding column norms
    std::vector<BarlowTwinsDetail> pairs;   ///< per (v1 < v2), row-major pair order
};
StepResult model_step(const std::vector<Matrix>& Xt, const Matrix& W, const Matrix& W_de,
                      const Matrix& centers, const Matrix& P, bool use_fd, bool use_msce,
                      bool want_grads);

/// Standard Adam with bias correction; weight decay is decoupled (parameter
/// shrinkage) and applied to W and W_de only, never to the centers.
void adam_step(ModelState& state, const Gradients& grads, double lr, double weight_decay,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

/// Row argmax; ties break toward the smallest cluster index.
Labels assign_labels(const Matrix& Q);

struct TrainResult {
    ModelState state;
    LossReport history;
    Labels labels;
    Matrix Z_cat;                      ///< final concatenated embedding
    std::vector<FilterMatrix> filters;
};

/// Full pipeline: per-view filter solve, attribute smoothing, k-means center
/// initialization on the epoch-0 embedding, then `epochs` full-batch Adam
/// steps over L_MSCE + L_FD + L_CLU. Single-view graphs train with the
/// decorrelation term omitted (history.fd_active = false).
TrainResult train(const MultiRelationalGraph& graph, const TrainConfig& cfg);

}  // namespace btgf
