#include "btgf/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

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

std::map<std::string, std::string> parse_key_value_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

long parse_long(const std::string& v, const fs::path& file, const std::string& key) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw DataError(file.string() + ": key '" + key + "' is not an integer: '" + v + "'");
    }
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << std::setprecision(17);
    return out;
}

}  // namespace

DatasetManifest read_manifest(const fs::path& path) {
    auto kv = parse_key_value_file(path);
    auto need = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw DataError(path.string() + ": missing key '" + key + "'");
        return it->second;
    };
    DatasetManifest m;
    m.name = need("name");
    m.n = parse_long(need("n"), path, "n");
    m.V = static_cast<int>(parse_long(need("V"), path, "V"));
    m.c = static_cast<int>(parse_long(need("c"), path, "c"));
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    for (const auto& rel : split(need("relations"), ','))
        if (!rel.empty()) m.relations.push_back(base / rel);
    m.attributes = base / need("attributes");
    if (auto it = kv.find("labels"); it != kv.end() && !it->second.empty())
        m.labels = base / it->second;

    if (m.n < 1) throw DataError(path.string() + ": n must be >= 1");
    if (m.V != static_cast<int>(m.relations.size()))
        throw DataError(path.string() + ": V=" + std::to_string(m.V) + " but " +
                        std::to_string(m.relations.size()) + " relation files listed");
    for (const auto& rel : m.relations)
        if (!fs::exists(rel)) throw DataError(path.string() + ": relation file missing: " + rel.string());
    if (!fs::exists(m.attributes))
        throw DataError(path.string() + ": attribute file missing: " + m.attributes.string());
    if (!m.labels.empty() && !fs::exists(m.labels))
        throw DataError(path.string() + ": label file missing: " + m.labels.string());
    return m;
}

namespace {

Matrix load_edge_list(const fs::path& path, Index n) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    Matrix adj = Matrix::Zero(n, n);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream row(t);
        long src, dst;
        double w = 1.0;
        if (!(row >> src >> dst))
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected 'src dst [weight]'");
        row >> w;
        if (src < 0 || src >= n || dst < 0 || dst >= n)
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": node index out of range [0, " +
                            std::to_string(n) + ")");
        if (w < 0.0)
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": negative edge weight");
        adj(src, dst) += w;
        if (src != dst) adj(dst, src) += w;
    }
    return adj;
}

Matrix load_attribute_csv(const fs::path& path, Index n) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split(t, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": ragged row (" +
                            std::to_string(row.size()) + " vs " + std::to_string(rows.front().size()) + " columns)");
        rows.push_back(std::move(row));
    }
    if (static_cast<Index>(rows.size()) != n)
        throw DataError(path.string() + ": " + std::to_string(rows.size()) + " rows, manifest declares n=" +
                        std::to_string(n));
    Matrix X(n, static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < X.cols(); ++j) X(i, j) = rows[i][j];
    return X;
}

}  // namespace

Labels load_labels(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    Labels labels;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        try {
            labels.push_back(std::stoi(t));
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad label '" + t + "'");
        }
    }
    return labels;
}

MultiRelationalGraph load_dataset(const fs::path& manifest_path) {
    const DatasetManifest m = read_manifest(manifest_path);
    MultiRelationalGraph g;
    g.n = m.n;
    g.num_classes = m.c;
    for (const auto& rel : m.relations) g.adjacency.push_back(load_edge_list(rel, m.n));
    g.attributes = load_attribute_csv(m.attributes, m.n);
    if (!m.labels.empty()) {
        Labels labels = load_labels(m.labels);
        if (static_cast<Index>(labels.size()) != m.n)
            throw DataError(m.labels.string() + ": " + std::to_string(labels.size()) +
                            " labels, manifest declares n=" + std::to_string(m.n));
        for (int y : labels)
            if (y < 0 || y >= m.c)
                throw DataError(m.labels.string() + ": label " + std::to_string(y) +
                                " outside [0, " + std::to_string(m.c) + ")");
        g.labels = std::move(labels);
    }
    g.validate();
    return g;
}

void SbmConfig::validate() const {
    if (blocks.empty()) throw ParameterError("sbm: need at least one block");
    for (int b : blocks)
        if (b < 1) throw ParameterError("sbm: block sizes must be >= 1");
    if (intra.empty() || intra.size() != inter.size())
        throw ParameterError("sbm: intra/inter probability lists must be non-empty and equal length");
    for (double p : intra)
        if (p < 0.0 || p > 1.0) throw ParameterError("sbm: intra probability outside [0,1]");
    for (double p : inter)
        if (p < 0.0 || p > 1.0) throw ParameterError("sbm: inter probability outside [0,1]");
    if (f < static_cast<int>(blocks.size()))
        throw ParameterError("sbm: attribute dimension f must be >= number of blocks");
    if (noise < 0.0 || mean_separation < 0.0) throw ParameterError("sbm: negative scale");
}

SbmConfig SbmConfig::default_fixture() {
    SbmConfig cfg;
    cfg.blocks = {50, 50, 50};
    cfg.intra = {0.5, 0.4};
    cfg.inter = {0.02, 0.02};
    cfg.f = 20;
    cfg.noise = 0.15;
    cfg.mean_separation = 5.0 * cfg.noise;
    cfg.seed = 7;
    return cfg;
}

MultiRelationalGraph generate_sbm(const SbmConfig& cfg) {
    cfg.validate();
    const int B = static_cast<int>(cfg.blocks.size());
    const int V = static_cast<int>(cfg.intra.size());
    Index n = 0;
    for (int b : cfg.blocks) n += b;

    MultiRelationalGraph g;
    g.n = n;
    g.num_classes = B;
    Labels labels(n);
    {
        Index i = 0;
        for (int b = 0; b < B; ++b)
            for (int k = 0; k < cfg.blocks[b]; ++k) labels[i++] = b;
    }

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int v = 0; v < V; ++v) {
        Matrix adj = Matrix::Zero(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j) {
                const double p = labels[i] == labels[j] ? cfg.intra[v] : cfg.inter[v];
                if (unit(rng) < p) {
                    adj(i, j) = 1.0;
                    adj(j, i) = 1.0;
                }
            }
        g.adjacency.push_back(std::move(adj));
    }

    // Block means sit at scaled basis vectors so every pair of means is
    // exactly mean_separation apart.
    const double scale = cfg.mean_separation / std::sqrt(2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    g.attributes = Matrix::Zero(n, cfg.f);
    for (Index i = 0; i < n; ++i) {
        g.attributes(i, labels[i]) = scale;
        for (int k = 0; k < cfg.f; ++k) g.attributes(i, k) += cfg.noise * gauss(rng);
    }
    g.labels = std::move(labels);
    g.validate();
    return g;
}

void write_dataset(const MultiRelationalGraph& graph, const std::string& name, const fs::path& dir) {
    graph.validate();
    fs::create_directories(dir);
    std::vector<std::string> rel_names;
    for (Index v = 0; v < graph.views(); ++v) {
        const std::string rel = name + ".rel" + std::to_string(v) + ".txt";
        rel_names.push_back(rel);
        std::ofstream out = open_out(dir / rel);
        const Matrix& adj = graph.adjacency[v];
        for (Index i = 0; i < graph.n; ++i)
            for (Index j = i; j < graph.n; ++j)
                if (adj(i, j) != 0.0) out << i << " " << j << " " << adj(i, j) << "\n";
    }
    {
        std::ofstream out = open_out(dir / (name + ".attrs.csv"));
        for (Index i = 0; i < graph.n; ++i) {
            for (Index j = 0; j < graph.attributes.cols(); ++j)
                out << (j ? "," : "") << graph.attributes(i, j);
            out << "\n";
        }
    }
    if (graph.labels) export_labels(*graph.labels, dir / (name + ".labels.txt"));

    std::ofstream out = open_out(dir / (name + ".manifest"));
    out << "name = " << name << "\n";
    out << "n = " << graph.n << "\n";
    out << "V = " << graph.views() << "\n";
    out << "c = " << graph.num_classes << "\n";
    out << "relations = ";
    for (size_t v = 0; v < rel_names.size(); ++v) out << (v ? ", " : "") << rel_names[v];
    out << "\n";
    out << "attributes = " << name << ".attrs.csv\n";
    if (graph.labels) out << "labels = " << name << ".labels.txt\n";
}

void export_embeddings(const Matrix& Z_cat, const fs::path& path) {
    std::ofstream out = open_out(path);
    for (Index i = 0; i < Z_cat.rows(); ++i) {
        for (Index j = 0; j < Z_cat.cols(); ++j) out << (j ? "," : "") << Z_cat(i, j);
        out << "\n";
    }
}

void export_metrics(const ClusterEvaluation& ev, const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "acc,f1,nmi,ari\n";
    out << ev.acc << "," << ev.f1 << "," << ev.nmi << "," << ev.ari << "\n";
}

void export_losses(const LossReport& history, const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "epoch,l_fd,l_msce,l_clu,total,prop1_lower,prop2_upper\n";
    for (const auto& e : history.epochs)
        out << e.epoch << "," << e.l_fd << "," << e.l_msce << "," << e.l_clu << "," << e.total << ","
            << e.prop1_lower << "," << e.prop2_upper << "\n";
}

void export_bounds(const LossReport& history, const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "epoch,pair,l_fd,lower,upper,min_eig\n";
    for (const auto& b : history.pair_bounds)
        out << b.epoch << "," << b.v1 << "-" << b.v2 << "," << b.l_bt << "," << b.lower << ","
            << b.upper << "," << b.min_eig << "\n";
}

void export_labels(const Labels& labels, const fs::path& path) {
    std::ofstream out = open_out(path);
    for (int y : labels) out << y << "\n";
}

namespace {

void write_named_matrix(std::ofstream& out, const std::string& name, const Matrix& m) {
    out << name << " " << m.rows() << " " << m.cols() << "\n";
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
        out << "\n";
    }
}

Matrix read_named_matrix(std::istream& in, const std::string& expect, const fs::path& path) {
    std::string name;
    Index rows, cols;
    if (!(in >> name >> rows >> cols) || name != expect)
        throw DataError(path.string() + ": checkpoint block '" + expect + "' missing or malformed");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            if (!(in >> m(i, j)))
                throw DataError(path.string() + ": truncated checkpoint block '" + expect + "'");
    return m;
}

}  // namespace

void save_checkpoint(const ModelState& state, const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "btgf-checkpoint 1\n";
    out << "epoch " << state.epoch << "\n";
    write_named_matrix(out, "W", state.W);
    write_named_matrix(out, "W_de", state.W_de);
    write_named_matrix(out, "centers", state.centers);
    write_named_matrix(out, "mom_W_m", state.mom_W.m);
    write_named_matrix(out, "mom_W_v", state.mom_W.v);
    write_named_matrix(out, "mom_W_de_m", state.mom_W_de.m);
    write_named_matrix(out, "mom_W_de_v", state.mom_W_de.v);
    write_named_matrix(out, "mom_centers_m", state.mom_centers.m);
    write_named_matrix(out, "mom_centers_v", state.mom_centers.v);
}

ModelState load_checkpoint(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string magic;
    int version;
    if (!(in >> magic >> version) || magic != "btgf-checkpoint")
        throw DataError(path.string() + ": not a btgf checkpoint");
    if (version != 1)
        throw DataError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
    ModelState s;
    std::string key;
    if (!(in >> key >> s.epoch) || key != "epoch")
        throw DataError(path.string() + ": malformed checkpoint header");
    s.W = read_named_matrix(in, "W", path);
    s.W_de = read_named_matrix(in, "W_de", path);
    s.centers = read_named_matrix(in, "centers", path);
    s.mom_W.m = read_named_matrix(in, "mom_W_m", path);
    s.mom_W.v = read_named_matrix(in, "mom_W_v", path);
    s.mom_W_de.m = read_named_matrix(in, "mom_W_de_m", path);
    s.mom_W_de.v = read_named_matrix(in, "mom_W_de_v", path);
    s.mom_centers.m = read_named_matrix(in, "mom_centers_m", path);
    s.mom_centers.v = read_named_matrix(in, "mom_centers_v", path);
    return s;
}

}  // namespace btgf
