#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "btgf/data_io.hpp"
#include "btgf/errors.hpp"
#include "btgf/metrics.hpp"
#include "btgf/model.hpp"

using namespace btgf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("btgf_io_" + std::to_string(::getpid()) + "_" +
                                                  std::to_string(counter++))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

}  // namespace

TEST_CASE("edge lists build symmetric adjacency with weight accumulation") {
    TempDir dir;
    write_file(dir.path / "rel.txt", "0 1\n");
    write_file(dir.path / "attrs.csv", "1,0\n0,1\n");
    write_file(dir.path / "m.manifest",
               "name = toy\nn = 2\nV = 1\nc = 2\nrelations = rel.txt\nattributes = attrs.csv\n");
    MultiRelationalGraph g = load_dataset(dir.path / "m.manifest");
    CHECK(g.adjacency[0](0, 1) == 1.0);
    CHECK(g.adjacency[0](1, 0) == 1.0);
    CHECK(g.adjacency[0](0, 0) == 0.0);

    write_file(dir.path / "rel.txt", "0 1\n0 1\n");  // duplicate accumulates
    g = load_dataset(dir.path / "m.manifest");
    CHECK(g.adjacency[0](0, 1) == 2.0);

    write_file(dir.path / "rel.txt", "0 1 0.25\n1 0 0.25\n");  // directed duplicates
    g = load_dataset(dir.path / "m.manifest");
    CHECK(g.adjacency[0](0, 1) == 0.5);
}

TEST_CASE("loader errors carry file and line context") {
    TempDir dir;
    write_file(dir.path / "attrs.csv", "1,0\n0,1\n");
    write_file(dir.path / "rel.txt", "0 5\n");
    write_file(dir.path / "m.manifest",
               "name = toy\nn = 2\nV = 1\nc = 2\nrelations = rel.txt\nattributes = attrs.csv\n");
    try {
        load_dataset(dir.path / "m.manifest");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("rel.txt") != std::string::npos);
        CHECK(msg.find(":1") != std::string::npos);
    }

    write_file(dir.path / "rel.txt", "0 1\n");
    write_file(dir.path / "attrs.csv", "1,0\n0,1\n0,0\n");  // 3 rows vs n=2
    CHECK_THROWS_AS(load_dataset(dir.path / "m.manifest"), DataError);

    write_file(dir.path / "attrs.csv", "1,0\n0\n");  // ragged
    CHECK_THROWS_AS(load_dataset(dir.path / "m.manifest"), DataError);

    CHECK_THROWS_AS(load_dataset(dir.path / "missing.manifest"), DataError);
}

TEST_CASE("manifest validation") {
    TempDir dir;
    write_file(dir.path / "m.manifest", "name = toy\nn = 2\n");
    CHECK_THROWS_AS(read_manifest(dir.path / "m.manifest"), DataError);

    write_file(dir.path / "rel.txt", "0 1\n");
    write_file(dir.path / "attrs.csv", "1\n1\n");
    write_file(dir.path / "m.manifest",
               "name = toy\nn = 2\nV = 2\nc = 2\nrelations = rel.txt\nattributes = attrs.csv\n");
    CHECK_THROWS_AS(read_manifest(dir.path / "m.manifest"), DataError);  // V mismatch
}

TEST_CASE("manifests can declare benchmark-scale datasets") {
    TempDir dir;
    write_file(dir.path / "pap.txt", "0 1\n");
    write_file(dir.path / "psp.txt", "0 2\n");
    write_file(dir.path / "attrs.csv", "1,0\n0,1\n");
    write_file(dir.path / "acm.manifest",
               "name = acm\nn = 3025\nV = 2\nc = 3\nrelations = pap.txt, psp.txt\n"
               "attributes = attrs.csv\n");
    DatasetManifest m = read_manifest(dir.path / "acm.manifest");
    CHECK(m.n == 3025);
    CHECK(m.V == 2);
    CHECK(m.c == 3);
    CHECK(m.relations.size() == 2);
}

TEST_CASE("labels outside [0, c) are rejected") {
    TempDir dir;
    write_file(dir.path / "rel.txt", "0 1\n");
    write_file(dir.path / "attrs.csv", "1\n1\n");
    write_file(dir.path / "labels.txt", "0\n7\n");
    write_file(dir.path / "m.manifest",
               "name = toy\nn = 2\nV = 1\nc = 2\nrelations = rel.txt\nattributes = attrs.csv\n"
               "labels = labels.txt\n");
    CHECK_THROWS_AS(load_dataset(dir.path / "m.manifest"), DataError);
}

TEST_CASE("sbm generator determinism and structure") {
    SbmConfig cfg = SbmConfig::default_fixture();
    cfg.blocks = {10, 10};
    MultiRelationalGraph a = generate_sbm(cfg);
    MultiRelationalGraph b = generate_sbm(cfg);
    CHECK((a.attributes - b.attributes).cwiseAbs().maxCoeff() == 0.0);
    for (Index v = 0; v < a.views(); ++v)
        CHECK((a.adjacency[v] - b.adjacency[v]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(*a.labels == *b.labels);

    cfg.seed = 99;
    MultiRelationalGraph c = generate_sbm(cfg);
    CHECK((a.attributes - c.attributes).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("extreme probabilities give unions of complete blocks") {
    SbmConfig cfg;
    cfg.blocks = {4, 3};
    cfg.intra = {1.0};
    cfg.inter = {0.0};
    cfg.f = 4;
    cfg.seed = 5;
    MultiRelationalGraph g = generate_sbm(cfg);
    const Matrix& adj = g.adjacency[0];
    for (Index i = 0; i < g.n; ++i)
        for (Index j = 0; j < g.n; ++j) {
            if (i == j) continue;
            const bool same = (*g.labels)[i] == (*g.labels)[j];
            CHECK(adj(i, j) == (same ? 1.0 : 0.0));
        }
}

TEST_CASE("zero noise puts attributes exactly on the block means") {
    SbmConfig cfg = SbmConfig::default_fixture();
    cfg.blocks = {6, 6, 6};
    cfg.noise = 0.0;
    MultiRelationalGraph g = generate_sbm(cfg);
    // all rows of a block identical, and raw k-means recovers the blocks
    CHECK((g.attributes.row(0) - g.attributes.row(1)).cwiseAbs().maxCoeff() == 0.0);
    auto [centers, labels] = kmeans(g.attributes, 3, 5, 1);
    CHECK(hungarian_accuracy(labels, *g.labels).first == doctest::Approx(1.0));
}

TEST_CASE("generated datasets round-trip through the file formats") {
    SbmConfig cfg = SbmConfig::default_fixture();
    cfg.blocks = {8, 8};
    MultiRelationalGraph g = generate_sbm(cfg);
    TempDir dir;
    write_dataset(g, "round", dir.path);
    MultiRelationalGraph r = load_dataset(dir.path / "round.manifest");
    CHECK(r.n == g.n);
    CHECK(r.num_classes == g.num_classes);
    CHECK((r.attributes - g.attributes).cwiseAbs().maxCoeff() == 0.0);  // 17 digits are lossless
    for (Index v = 0; v < g.views(); ++v)
        CHECK((r.adjacency[v] - g.adjacency[v]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(*r.labels == *g.labels);
}

TEST_CASE("csv exports have the documented shapes") {
    TempDir dir;
    ClusterEvaluation ev;
    ev.acc = ev.f1 = ev.nmi = ev.ari = 1.0;
    export_metrics(ev, dir.path / "metrics.csv");
    std::ifstream in(dir.path / "metrics.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "acc,f1,nmi,ari");
    CHECK(row == "1,1,1,1");

    LossReport history;
    for (int e = 0; e < 5; ++e) {
        EpochLoss rec;
        rec.epoch = e;
        history.epochs.push_back(rec);
    }
    export_losses(history, dir.path / "losses.csv");
    std::ifstream lin(dir.path / "losses.csv");
    int lines = 0;
    std::string line;
    while (std::getline(lin, line)) ++lines;
    CHECK(lines == 6);  // header + one row per epoch

    Matrix Z(3, 4);
    Z.setRandom();
    export_embeddings(Z, dir.path / "emb.csv");
    std::ifstream ein(dir.path / "emb.csv");
    lines = 0;
    while (std::getline(ein, line)) ++lines;
    CHECK(lines == 3);
}

TEST_CASE("bounds csv uses the documented header") {
    TempDir dir;
    LossReport history;
    PairBound pb;
    pb.epoch = 0;
    pb.v1 = 0;
    pb.v2 = 1;
    history.pair_bounds.push_back(pb);
    export_bounds(history, dir.path / "bounds.csv");
    std::ifstream in(dir.path / "bounds.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "epoch,pair,l_fd,lower,upper,min_eig");
    std::string row;
    std::getline(in, row);
    CHECK(row.find("0,0-1,") == 0);
}

TEST_CASE("checkpoints round-trip bitwise") {
    ModelState s;
    s.W = Matrix::Random(4, 3);
    s.W_de = Matrix::Random(3, 4);
    s.centers = Matrix::Random(2, 6);
    s.mom_W.init(4, 3);
    s.mom_W.m.setRandom();
    s.mom_W.v = s.mom_W.v.array() + 0.5;
    s.mom_W_de.init(3, 4);
    s.mom_centers.init(2, 6);
    s.epoch = 123;

    TempDir dir;
    save_checkpoint(s, dir.path / "ckpt.txt");
    ModelState r = load_checkpoint(dir.path / "ckpt.txt");
    CHECK(r.epoch == 123);
    CHECK((r.W - s.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.W_de - s.W_de).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.centers - s.centers).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.mom_W.m - s.mom_W.m).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.mom_W.v - s.mom_W.v).cwiseAbs().maxCoeff() == 0.0);

    write_file(dir.path / "bad.txt", "not-a-checkpoint 1\n");
    CHECK_THROWS_AS(load_checkpoint(dir.path / "bad.txt"), DataError);
}

TEST_CASE("label files round-trip") {
    TempDir dir;
    Labels labels = {0, 2, 1, 1, 0};
    export_labels(labels, dir.path / "labels.txt");
    CHECK(load_labels(dir.path / "labels.txt") == labels);
}
