#include "btgf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "btgf/bounds.hpp"
#include "btgf/errors.hpp"

namespace btgf {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, sep)) out.push_back(trim(tok));
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParameterError("config key '" + key + "': not a number: '" + v + "'");
    }
}

long to_long(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParameterError("config key '" + key + "': not an integer: '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ParameterError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

void RunConfig::validate() const {
    const bool has_manifest = !manifest.empty();
    const bool has_sbm = sbm.has_value();
    if (has_manifest == has_sbm)
        throw ParameterError("config must declare exactly one data source (data.manifest or sbm.*)");
    train.validate();
    if (has_sbm) sbm->validate();
}

RunConfig parse_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config " + path.string());
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

    RunConfig cfg;
    SbmConfig sbm;
    bool any_sbm = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));

        if (key == "data.manifest") cfg.manifest = base / val;
        else if (key == "out") cfg.out_dir = val;
        else if (key == "train.epochs") cfg.train.epochs = static_cast<int>(to_long(val, key));
        else if (key == "train.learning_rate") cfg.train.learning_rate = to_double(val, key);
        else if (key == "train.weight_decay") cfg.train.weight_decay = to_double(val, key);
        else if (key == "train.d") cfg.train.d = static_cast<int>(to_long(val, key));
        else if (key == "train.seed") cfg.train.seed = static_cast<std::uint64_t>(to_long(val, key));
        else if (key == "train.target_refresh_interval")
            cfg.train.target_refresh_interval = static_cast<int>(to_long(val, key));
        else if (key == "train.kmeans_restarts") cfg.train.kmeans_restarts = static_cast<int>(to_long(val, key));
        else if (key == "train.row_normalize") cfg.train.row_normalize = to_bool(val, key);
        else if (key == "train.use_fd") cfg.train.use_fd = to_bool(val, key);
        else if (key == "train.use_msce") cfg.train.use_msce = to_bool(val, key);
        else if (key == "filter.kind") cfg.train.filter.kind = filter_kind_from_string(val);
        else if (key == "filter.gamma") cfg.train.filter.gamma = to_double(val, key);
        else if (key == "filter.k") cfg.train.filter.k = static_cast<int>(to_long(val, key));
        else if (key == "sbm.blocks") {
            sbm.blocks.clear();
            for (const auto& b : split(val, ',')) sbm.blocks.push_back(static_cast<int>(to_long(b, key)));
            any_sbm = true;
        } else if (key == "sbm.intra") {
            sbm.intra.clear();
            for (const auto& p : split(val, ',')) sbm.intra.push_back(to_double(p, key));
            any_sbm = true;
        } else if (key == "sbm.inter") {
            sbm.inter.clear();
            for (const auto& p : split(val, ',')) sbm.inter.push_back(to_double(p, key));
            any_sbm = true;
        } else if (key == "sbm.f") { sbm.f = static_cast<int>(to_long(val, key)); any_sbm = true; }
        else if (key == "sbm.mean_sep") { sbm.mean_separation = to_double(val, key); any_sbm = true; }
        else if (key == "sbm.noise") { sbm.noise = to_double(val, key); any_sbm = true; }
        else if (key == "sbm.seed") { sbm.seed = static_cast<std::uint64_t>(to_long(val, key)); any_sbm = true; }
        else throw ParameterError(path.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (any_sbm) cfg.sbm = sbm;
    cfg.validate();
    return cfg;
}

MultiRelationalGraph load_run_data(const RunConfig& cfg) {
    cfg.validate();
    return cfg.sbm ? generate_sbm(*cfg.sbm) : load_dataset(cfg.manifest);
}

RunArtifacts run_pipeline(const MultiRelationalGraph& graph, const TrainConfig& cfg) {
    RunArtifacts art;
    art.result = train(graph, cfg);
    if (graph.labels) art.eval = evaluate_clustering(art.result.labels, *graph.labels);
    return art;
}

void write_artifacts(const RunArtifacts& art, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    if (art.eval) export_metrics(*art.eval, out_dir / "metrics.csv");
    export_losses(art.result.history, out_dir / "losses.csv");
    export_bounds(art.result.history, out_dir / "bounds.csv");
    export_embeddings(art.result.Z_cat, out_dir / "embeddings.csv");
    export_labels(art.result.labels, out_dir / "labels.txt");
    save_checkpoint(art.result.state, out_dir / "checkpoint.txt");
}

std::vector<AblationRow> ablate(const MultiRelationalGraph& graph, const TrainConfig& cfg, int seeds) {
    if (!graph.labels) throw ParameterError("ablate requires ground-truth labels");
    if (seeds < 1) throw ParameterError("ablate: seeds must be >= 1");

    struct Variant {
        std::string name;
        TrainConfig cfg;
        bool reuse_full = false;
    };
    std::vector<Variant> variants;
    auto with = [&](const std::string& name, FilterKind kind, bool fd, bool ms) {
        Variant v{name, cfg, false};
        v.cfg.filter.kind = kind;
        v.cfg.use_fd = fd;
        v.cfg.use_msce = ms;
        if (kind == FilterKind::low_pass) v.cfg.filter.k = 2;
        return v;
    };
    variants.push_back(with("learned", FilterKind::learned, true, true));
    variants.push_back(with("low_pass", FilterKind::low_pass, true, true));
    variants.push_back(with("mix_pass", FilterKind::mix_pass, true, true));
    variants.push_back(with("identity", FilterKind::identity, true, true));
    Variant full = with("full", FilterKind::learned, true, true);
    full.reuse_full = true;  // same configuration as "learned"; trained once
    variants.push_back(full);
    variants.push_back(with("no_fd", FilterKind::learned, false, true));
    variants.push_back(with("no_msce", FilterKind::learned, true, false));

    std::vector<AblationRow> rows;
    AblationRow learned_row;
    for (auto& v : variants) {
        AblationRow row;
        row.variant = v.name;
        if (v.reuse_full) {
            row.acc = learned_row.acc;
            row.f1 = learned_row.f1;
            row.nmi = learned_row.nmi;
            row.ari = learned_row.ari;
            rows.push_back(row);
            continue;
        }
        for (int s = 0; s < seeds; ++s) {
            TrainConfig run_cfg = v.cfg;
            run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(s);
            const RunArtifacts art = run_pipeline(graph, run_cfg);
            row.acc += art.eval->acc;
            row.f1 += art.eval->f1;
            row.nmi += art.eval->nmi;
            row.ari += art.eval->ari;
        }
        row.acc /= seeds;
        row.f1 /= seeds;
        row.nmi /= seeds;
        row.ari /= seeds;
        if (v.name == "learned") learned_row = row;
        rows.push_back(row);
    }
    return rows;
}

void write_ablation_csv(const std::vector<AblationRow>& rows, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << std::setprecision(17);
    out << "variant,acc,f1,nmi,ari\n";
    for (const auto& r : rows)
        out << r.variant << "," << r.acc << "," << r.f1 << "," << r.nmi << "," << r.ari << "\n";
}

namespace {

int effective_workers(int requested, size_t points) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("BTGF_MAX_THREADS")) {
        try {
            cap = std::min(cap, std::max(1, std::stoi(env)));
        } catch (const std::exception&) {
            throw ParameterError("BTGF_MAX_THREADS is not an integer");
        }
    }
    if (requested > 0) cap = std::min(cap, requested);
    return std::min<int>(cap, static_cast<int>(points));
}

}  // namespace

std::vector<SweepPoint> sweep_filter_grid(const MultiRelationalGraph& graph, const TrainConfig& cfg,
                                          int workers) {
    static const int ks[] = {1, 2, 3, 4, 5};
    static const double gammas[] = {0.1, 1.0, 10.0, 100.0, 1000.0};

    std::vector<SweepPoint> points;
    for (int k : ks)
        for (double g : gammas) points.push_back({k, g, 0.0, graph.labels.has_value()});

    const int nworkers = effective_workers(workers, points.size());
    std::atomic<size_t> next{0};
    std::vector<std::string> errors(points.size());

    auto work = [&] {
        for (size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
            try {
                TrainConfig point_cfg = cfg;
                point_cfg.filter.kind = FilterKind::learned;
                point_cfg.filter.k = points[i].k;
                point_cfg.filter.gamma = points[i].gamma;
                const RunArtifacts art = run_pipeline(graph, point_cfg);
                points[i].score = graph.labels ? art.eval->acc
                                               : silhouette_score(art.result.Z_cat, art.result.labels);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (nworkers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nworkers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (size_t i = 0; i < points.size(); ++i)
        if (!errors[i].empty())
            throw NumericError("sweep point k=" + std::to_string(points[i].k) + " gamma=" +
                               std::to_string(points[i].gamma) + " failed: " + errors[i]);
    return points;
}

SweepPoint best_sweep_point(const std::vector<SweepPoint>& points) {
    if (points.empty()) throw ParameterError("best_sweep_point: empty sweep");
    SweepPoint best = points.front();
    for (const auto& p : points)
        if (p.score > best.score) best = p;
    return best;
}

void write_sweep_csv(const std::vector<SweepPoint>& points, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << std::setprecision(17);
    out << "k,gamma,score,criterion\n";
    for (const auto& p : points)
        out << p.k << "," << p.gamma << "," << p.score << ","
            << (p.by_accuracy ? "acc" : "silhouette") << "\n";
}

}  // namespace btgf
