#pragma once

#include <vector>

namespace btgf {

/// One row of the per-epoch training history. The bound columns are the
/// pair-averaged Proposition-1 lower and Proposition-2 upper values computed
/// from the live column norms and cross-correlation of that epoch.
struct EpochLoss {
    int epoch = 0;
    double l_fd = 0.0;
    double l_msce = 0.0;
    double l_clu = 0.0;
    double total = 0.0;
    double prop1_lower = 0.0;
    double prop2_upper = 0.0;
};

/// Per-epoch, per-view-pair bound record. min_eig is the smallest eigenvalue
/// of the symmetric part of H = Xt1^T Xt2 for that pair (constant over
/// epochs, recorded with each row for plot-ready export).
struct PairBound {
    int epoch = 0;
    int v1 = 0;
    int v2 = 1;
    double l_bt = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double min_eig = 0.0;
};

struct LossReport {
    bool fd_active = true;  ///< false for single-view runs (L_FD omitted)
    std::vector<EpochLoss> epochs;
    std::vector<PairBound> pair_bounds;
};

}  // namespace btgf
