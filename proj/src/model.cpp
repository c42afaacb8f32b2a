#include "btgf/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "btgf/bounds.hpp"
#include "btgf/errors.hpp"

namespace btgf {

void TrainConfig::validate() const {
    if (epochs < 1) throw ParameterError("epochs must be >= 1");
    if (learning_rate <= 0.0) throw ParameterError("learning_rate must be > 0");
    if (weight_decay < 0.0) throw ParameterError("weight_decay must be >= 0");
    if (d < 1) throw ParameterError("embedding dimension d must be >= 1");
    if (target_refresh_interval < 1) throw ParameterError("target_refresh_interval must be >= 1");
    if (kmeans_restarts < 1) throw ParameterError("kmeans_restarts must be >= 1");
    filter.validate();
}

Matrix encode(const Matrix& Xt, const Matrix& W) {
    if (Xt.cols() != W.rows())
        throw ShapeError("encode: attribute dim " + std::to_string(Xt.cols()) +
                         " vs encoder rows " + std::to_string(W.rows()));
    return Xt * W;
}

Matrix decode(const Matrix& Z, const Matrix& W_de) {
    if (Z.cols() != W_de.rows())
        throw ShapeError("decode: embedding dim " + std::to_string(Z.cols()) +
                         " vs decoder rows " + std::to_string(W_de.rows()));
    return Z * W_de;
}

namespace {

double wcss(const Matrix& Z, const Matrix& centers, const Labels& labels) {
    double s = 0.0;
    for (Index i = 0; i < Z.rows(); ++i) s += (Z.row(i) - centers.row(labels[i])).squaredNorm();
    return s;
}

Labels nearest_center(const Matrix& Z, const Matrix& centers) {
    Labels labels(Z.rows());
    for (Index i = 0; i < Z.rows(); ++i) {
        int best = 0;
        double best_d = (Z.row(i) - centers.row(0)).squaredNorm();
        for (Index j = 1; j < centers.rows(); ++j) {
            const double dist = (Z.row(i) - centers.row(j)).squaredNorm();
            if (dist < best_d) { best_d = dist; best = static_cast<int>(j); }
        }
        labels[i] = best;
    }
    return labels;
}

Matrix kmeanspp_seed(const Matrix& Z, int c, std::mt19937_64& rng) {
    const Index n = Z.rows();
    std::uniform_int_distribution<Index> first(0, n - 1);
    Matrix centers(c, Z.cols());
    centers.row(0) = Z.row(first(rng));

    Vector d2 = (Z.rowwise() - centers.row(0)).rowwise().squaredNorm();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int j = 1; j < c; ++j) {
        const double total = d2.sum();
        Index pick = 0;
        if (total > 0.0) {
            double r = unit(rng) * total, acc = 0.0;
            for (Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) { pick = i; break; }
            }
        } else {
            pick = first(rng);  // all points coincide with chosen centers
        }
        centers.row(j) = Z.row(pick);
        d2 = d2.cwiseMin((Z.rowwise() - centers.row(j)).rowwise().squaredNorm());
    }
    return centers;
}

}  // namespace

std::pair<Matrix, Labels> kmeans(const Matrix& Z, int c, int restarts, std::uint64_t seed) {
    const Index n = Z.rows();
    if (c < 1) throw ParameterError("kmeans: c must be >= 1");
    if (n < c) throw ParameterError("kmeans: n=" + std::to_string(n) + " < c=" + std::to_string(c));
    if (restarts < 1) throw ParameterError("kmeans: restarts must be >= 1");

    std::mt19937_64 rng(seed);
    Matrix best_centers;
    Labels best_labels;
    double best_cost = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        Matrix centers = kmeanspp_seed(Z, c, rng);
        Labels labels = nearest_center(Z, centers);
        for (int iter = 0; iter < 100; ++iter) {
            // means
            Matrix sums = Matrix::Zero(c, Z.cols());
            std::vector<int> count(c, 0);
            for (Index i = 0; i < n; ++i) {
                sums.row(labels[i]) += Z.row(i);
                ++count[labels[i]];
            }
            for (int j = 0; j < c; ++j) {
                if (count[j] > 0) {
                    centers.row(j) = sums.row(j) / count[j];
                } else {
                    // re-seed to the point farthest from its assigned center
                    Index far = 0;
                    double far_d = -1.0;
                    for (Index i = 0; i < n; ++i) {
                        const double dist = (Z.row(i) - centers.row(labels[i])).squaredNorm();
                        if (dist > far_d) { far_d = dist; far = i; }
                    }
                    centers.row(j) = Z.row(far);
                }
            }
            Labels next = nearest_center(Z, centers);
            const bool stable = next == labels;
            labels = std::move(next);
            if (stable) break;
        }
        const double cost = wcss(Z, centers, labels);
        if (cost < best_cost) {
            best_cost = cost;
            best_centers = std::move(centers);
            best_labels = std::move(labels);
        }
    }
    return {best_centers, best_labels};
}

Matrix compute_q(const std::vector<Matrix>& Xt, const Matrix& W, const Matrix& centers) {
    const Index n = Xt.front().rows();
    Matrix Z_cat(n, static_cast<Index>(Xt.size()) * W.cols());
    for (size_t v = 0; v < Xt.size(); ++v)
        Z_cat.middleCols(static_cast<Index>(v) * W.cols(), W.cols()) = encode(Xt[v], W);
    return soft_assignment(Z_cat, centers);
}

StepResult model_step(const std::vector<Matrix>& Xt, const Matrix& W, const Matrix& W_de,
                      const Matrix& centers, const Matrix& P, bool use_fd, bool use_msce,
                      bool want_grads) {
    const int V = static_cast<int>(Xt.size());
    if (V < 1) throw ParameterError("model_step: no views");
    const Index n = Xt.front().rows();
    const Index d = W.cols();

    StepResult out;
    std::vector<Matrix> Z(V);
    out.Z_cat.resize(n, V * d);
    out.col_norms.resize(V);
    for (int v = 0; v < V; ++v) {
        Z[v] = encode(Xt[v], W);
        out.col_norms[v] = column_normalize(Z[v]).second;  // collapse check per view
        out.Z_cat.middleCols(v * d, d) = Z[v];
    }
    out.Q = soft_assignment(out.Z_cat, centers);

    std::vector<Matrix> G_Z;
    if (want_grads) {
        G_Z.assign(V, Matrix::Zero(n, d));
        out.grads.W = Matrix::Zero(W.rows(), W.cols());
        out.grads.W_de = Matrix::Zero(W_de.rows(), W_de.cols());
        out.grads.centers = Matrix::Zero(centers.rows(), centers.cols());
    }

    // Reconstruction (scaled cosine error), mean over views.
    if (use_msce) {
        const double w = 1.0 / V;
        for (int v = 0; v < V; ++v) {
            const Matrix Xbar = decode(Z[v], W_de);
            Matrix G_Xbar;
            if (want_grads) G_Xbar = Matrix::Zero(n, Xbar.cols());
            double view_loss = 0.0;
            for (Index i = 0; i < n; ++i) {
                const double nt = Xt[v].row(i).norm(), nr = Xbar.row(i).norm();
                if (nt < 1e-12 || nr < 1e-12)
                    throw DegenerateRowError("sce: row " + std::to_string(i) +
                                             " has near-zero norm in view " + std::to_string(v));
                const double dot = Xt[v].row(i).dot(Xbar.row(i));
                const double cossim = dot / (nt * nr);
                const double err = 1.0 - cossim;
                view_loss += err * err;
                if (want_grads)
                    G_Xbar.row(i) = -2.0 * err *
                                    (Xt[v].row(i) / (nt * nr) - (dot / (nt * nr * nr * nr)) * Xbar.row(i));
            }
            out.loss.msce += w * view_loss;
            if (want_grads) {
                out.grads.W_de.noalias() += w * (Z[v].transpose() * G_Xbar);
                G_Z[v].noalias() += w * (G_Xbar * W_de.transpose());
            }
        }
    }

    // Feature decorrelation over unordered view pairs.
    if (use_fd && V >= 2) {
        const double wp = 2.0 / (static_cast<double>(V) * (V - 1));
        for (int v1 = 0; v1 < V; ++v1)
            for (int v2 = v1 + 1; v2 < V; ++v2) {
                BarlowTwinsDetail bt = barlow_twins_detail(Z[v1], Z[v2], kBarlowLambda);
                out.loss.fd += wp * bt.loss;
                if (want_grads) {
                    Matrix G_M(d, d);
                    for (Index i = 0; i < d; ++i)
                        for (Index j = 0; j < d; ++j)
                            G_M(i, j) = i == j ? wp * 2.0 * (bt.M(i, j) - 1.0)
                                               : wp * 2.0 * kBarlowLambda * bt.M(i, j);
                    const Matrix Zh1 = Z[v1] * bt.norms1.cwiseInverse().asDiagonal();
                    const Matrix Zh2 = Z[v2] * bt.norms2.cwiseInverse().asDiagonal();
                    const Matrix G_Zh1 = Zh2 * G_M.transpose();
                    const Matrix G_Zh2 = Zh1 * G_M;
                    // back through the column normalization
                    for (Index j = 0; j < d; ++j) {
                        G_Z[v1].col(j) +=
                            (G_Zh1.col(j) - Zh1.col(j).dot(G_Zh1.col(j)) * Zh1.col(j)) / bt.norms1[j];
                        G_Z[v2].col(j) +=
                            (G_Zh2.col(j) - Zh2.col(j).dot(G_Zh2.col(j)) * Zh2.col(j)) / bt.norms2[j];
                    }
                }
                out.pairs.push_back(std::move(bt));
            }
    }

    // Self-supervised clustering term, target held constant.
    out.loss.clu = kl_clustering_loss(P, out.Q);
    if (want_grads) {
        const Index c = centers.rows();
        Matrix G_Zcat = Matrix::Zero(n, V * d);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < c; ++j) {
                const Eigen::RowVectorXd diff = out.Z_cat.row(i) - centers.row(j);
                const double kernel = 1.0 / (1.0 + diff.squaredNorm());
                const double coef = 2.0 * kernel * (P(i, j) - out.Q(i, j));
                G_Zcat.row(i) += coef * diff;
                out.grads.centers.row(j) -= coef * diff;
            }
        for (int v = 0; v < V; ++v) G_Z[v] += G_Zcat.middleCols(v * d, d);
    }

    out.loss.total = total_loss(out.loss.msce, out.loss.fd, out.loss.clu);
    if (want_grads)
        for (int v = 0; v < V; ++v) out.grads.W.noalias() += Xt[v].transpose() * G_Z[v];
    return out;
}

void adam_step(ModelState& state, const Gradients& grads, double lr, double weight_decay,
               double beta1, double beta2, double eps) {
    const int t = state.epoch + 1;
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);

    auto update = [&](Matrix& param, AdamMoments& mom, const Matrix& g, bool decay) {
        if (g.rows() != param.rows() || g.cols() != param.cols())
            throw ShapeError("adam_step: gradient/parameter shape mismatch");
        mom.m = beta1 * mom.m + (1.0 - beta1) * g;
        mom.v = beta2 * mom.v + (1.0 - beta2) * g.cwiseProduct(g);
        const Matrix mhat = mom.m / bc1;
        const Matrix vhat = mom.v / bc2;
        param.array() -= lr * mhat.array() / (vhat.array().sqrt() + eps);
        if (decay && weight_decay > 0.0) param *= 1.0 - lr * weight_decay;
    };
    update(state.W, state.mom_W, grads.W, true);
    update(state.W_de, state.mom_W_de, grads.W_de, true);
    update(state.centers, state.mom_centers, grads.centers, false);
    ++state.epoch;
}

Labels assign_labels(const Matrix& Q) {
    Labels labels(Q.rows());
    for (Index i = 0; i < Q.rows(); ++i) {
        int best = 0;
        for (Index j = 1; j < Q.cols(); ++j)
            if (Q(i, j) > Q(i, best)) best = static_cast<int>(j);
        labels[i] = best;
    }
    return labels;
}

namespace {

Matrix uniform_init(Index rows, Index cols, double bound, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
    return m;
}

double pair_min_eig(const Matrix& Xt1, const Matrix& Xt2) {
    const Matrix H = inner_product_matrix(Xt1, Xt2);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (H + H.transpose()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

}  // namespace

TrainResult train(const MultiRelationalGraph& graph, const TrainConfig& cfg) {
    graph.validate();
    cfg.validate();
    const int V = static_cast<int>(graph.views());
    const int c = graph.num_classes;
    if (c < 2) throw ParameterError("train: graph must declare num_classes >= 2");

    Matrix X = graph.attributes;
    if (cfg.row_normalize)
        for (Index i = 0; i < X.rows(); ++i) {
            const double norm = X.row(i).norm();
            if (norm > 0.0) X.row(i) /= norm;
        }
    const Index f = X.cols();

    TrainResult result;
    std::vector<Matrix> Xt(V);
    for (int v = 0; v < V; ++v) {
        FilterMatrix filt = make_filter(graph.adjacency[v], X, cfg.filter);
        Xt[v] = cfg.filter.kind == FilterKind::identity ? X : apply_filter(filt.K, X);
        result.filters.push_back(std::move(filt));
    }

    const bool fd_active = cfg.use_fd && V >= 2;
    result.history.fd_active = fd_active;

    std::vector<double> min_eigs;
    if (fd_active)
        for (int v1 = 0; v1 < V; ++v1)
            for (int v2 = v1 + 1; v2 < V; ++v2) min_eigs.push_back(pair_min_eig(Xt[v1], Xt[v2]));

    std::mt19937_64 rng(cfg.seed);
    ModelState state;
    // Encoder init is calibrated to the smoothed attributes so that typical
    // embedding distances land near the Student-t kernel's unit bandwidth.
    double row_sumsq = 0.0;
    for (const Matrix& xt : Xt) row_sumsq += xt.squaredNorm();
    const double rms_row = std::sqrt(row_sumsq / (static_cast<double>(V) * X.rows()));
    const double enc_bound =
        rms_row > 1e-300 ? std::sqrt(27.0 / (static_cast<double>(V) * cfg.d)) / rms_row
                         : 1.0 / std::sqrt(static_cast<double>(f));
    state.W = uniform_init(f, cfg.d, enc_bound, rng);
    state.W_de = uniform_init(cfg.d, f, 1.0 / std::sqrt(static_cast<double>(cfg.d)), rng);
    state.mom_W.init(f, cfg.d);
    state.mom_W_de.init(cfg.d, f);

    // Epoch-0 embedding seeds the cluster centers before any update.
    {
        Matrix Z_cat(X.rows(), static_cast<Index>(V) * cfg.d);
        for (int v = 0; v < V; ++v) {
            Matrix Z = encode(Xt[v], state.W);
            column_normalize(Z);  // fail fast on collapsed input
            Z_cat.middleCols(static_cast<Index>(v) * cfg.d, cfg.d) = Z;
        }
        state.centers = kmeans(Z_cat, c, cfg.kmeans_restarts, rng()).first;
        state.mom_centers.init(c, static_cast<Index>(V) * cfg.d);
    }

    Matrix P;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (epoch % cfg.target_refresh_interval == 0)
            P = target_distribution(compute_q(Xt, state.W, state.centers));

        StepResult step = model_step(Xt, state.W, state.W_de, state.centers, P, cfg.use_fd,
                                     cfg.use_msce, /*want_grads=*/true);
        if (!std::isfinite(step.loss.total))
            throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch));

        EpochLoss rec;
        rec.epoch = epoch;
        rec.l_fd = step.loss.fd;
        rec.l_msce = step.loss.msce;
        rec.l_clu = step.loss.clu;
        rec.total = step.loss.total;
        if (fd_active && !step.pairs.empty()) {
            size_t k = 0;
            double lower_sum = 0.0, upper_sum = 0.0;
            for (int v1 = 0; v1 < V; ++v1)
                for (int v2 = v1 + 1; v2 < V; ++v2, ++k) {
                    const BarlowTwinsDetail& bt = step.pairs[k];
                    PairBound pb;
                    pb.epoch = epoch;
                    pb.v1 = v1;
                    pb.v2 = v2;
                    pb.l_bt = bt.loss;
                    pb.lower = prop1_lower_bound(bt.norms1, bt.norms2);
                    pb.upper = prop2_upper_bound(bt.M, kBarlowLambda);
                    pb.min_eig = min_eigs[k];
                    lower_sum += pb.lower;
                    upper_sum += pb.upper;
                    result.history.pair_bounds.push_back(pb);
                }
            rec.prop1_lower = lower_sum / static_cast<double>(k);
            rec.prop2_upper = upper_sum / static_cast<double>(k);
        }
        result.history.epochs.push_back(rec);

        adam_step(state, step.grads, cfg.learning_rate, cfg.weight_decay);
        if (!state.W.allFinite() || !state.W_de.allFinite() || !state.centers.allFinite())
            throw DivergenceError("non-finite parameters after epoch " + std::to_string(epoch));
    }

    StepResult final_step = model_step(Xt, state.W, state.W_de, state.centers, P, cfg.use_fd,
                                       cfg.use_msce, /*want_grads=*/false);
    result.labels = assign_labels(final_step.Q);
    result.Z_cat = std::move(final_step.Z_cat);
    result.state = std::move(state);
    return result;
}

}  // namespace btgf
