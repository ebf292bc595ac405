#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reconet/cli.hpp"
#include "reconet/io.hpp"
#include "reconet/pipeline.hpp"

using namespace reconet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("reconet_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& file) const { return (path / file).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

const char* kConfig = R"({
  "seed": 11,
  "graph": {"model": "er", "nodes": 14, "params": {"p": 0.3}},
  "dynamics": {"model": "kuramoto", "steps": 400, "params": {"coupling": 0.5}, "transform": "sin"},
  "reconstructors": [
    {"method": "correlation"},
    {"method": "partial_correlation"},
    {"method": "graphical_lasso", "params": {"alpha": 0.05}},
    {"method": "mutual_information", "params": {"bins": 6}},
    {"method": "granger"},
    {"method": "transfer_entropy"}
  ],
  "threshold": "density"
})";

}  // namespace

TEST_CASE("generate, simulate and reconstruct chain") {
    TempDir dir("chain");
    CHECK(run({"generate", "--model", "ba", "--nodes", "20", "--param", "m=2", "--seed", "3", "--out",
               dir / "g.edgelist"})
              .code == 0);
    CHECK(io::read_edgelist(dir / "g.edgelist") == generate_ba(20, 2, 3));

    CHECK(run({"simulate", "--graph", dir / "g.edgelist", "--dynamics", "diffusion", "--steps", "300",
               "--seed", "1", "--out", dir / "ts.csv"})
              .code == 0);
    const Matrix ts = io::read_matrix_csv(dir / "ts.csv");
    CHECK(ts.rows() == 20);
    CHECK(ts.cols() == 300);

    const Run rec = run({"reconstruct", "--ts", dir / "ts.csv", "--method", "correlation", "--out",
                         dir / "w.csv", "--threshold", "degree:2"});
    CHECK(rec.code == 0);
    std::istringstream printed(rec.out);
    const Graph g = io::parse_edgelist(printed);
    CHECK(g.edge_count() == 20);
    CHECK(io::read_matrix_csv(dir / "w.csv").rows() == 20);

    CHECK(run({"reconstruct", "--ts", dir / "ts.csv", "--method", "granger", "--out", dir / "w2.csv",
               "--threshold", "quantile:0.1", "--graph-out", dir / "g2.edgelist"})
              .code == 0);
    CHECK(io::read_edgelist(dir / "g2.edgelist").directed());
}

TEST_CASE("exit codes") {
    TempDir dir("codes");
    io::write_edgelist(path_graph(4), dir / "p4.edgelist");
    io::write_edgelist(Graph::from_edges(4, {{0, 1}, {2, 3}}), dir / "split.edgelist");
    write_text(dir / "bad.edgelist", "0 1\n1 1\n");
    io::write_matrix_csv(Matrix::Random(3, 40), dir / "ts.csv");

    const Run unknown = run({"reconstruct", "--ts", dir / "ts.csv", "--method", "nosuch", "--out", dir / "w.csv"});
    CHECK(unknown.code == 5);
    for (const auto& name : reconstruction_names()) CHECK(unknown.err.find(name) != std::string::npos);
    CHECK(unknown.out.empty());

    CHECK(run({"distance", "--g1", dir / "p4.edgelist", "--g2", dir / "split.edgelist", "--measure",
               "resistance_perturbation"})
              .code == 3);
    CHECK(run({"distance", "--g1", dir / "bad.edgelist", "--g2", dir / "p4.edgelist"}).code == 2);
    CHECK(run({"distance", "--g1", dir / "missing", "--g2", dir / "p4.edgelist"}).code == 2);
    CHECK(run({"distance", "--g1", dir / "p4.edgelist", "--g2", dir / "p4.edgelist", "--measure", "bogus"}).code == 5);
    CHECK(run({"distance", "--g1", dir / "p4.edgelist", "--g2", dir / "p4.edgelist", "--bogus-flag"}).code == 5);
    CHECK(run({"distance", "--g1", dir / "p4.edgelist"}).code == 2);
    CHECK(run({"generate", "--model", "er", "--nodes", "5", "--param", "p=2", "--seed", "1", "--out",
               dir / "x.edgelist"})
              .code == 3);
    CHECK(run({"simulate", "--graph", dir / "p4.edgelist", "--dynamics", "diffusion", "--steps", "10",
               "--param", "eps=1", "--seed", "1", "--out", dir / "x.csv"})
              .code == 3);
    CHECK(run({"reconstruct", "--ts", dir / "ts.csv", "--method", "correlation", "--out", dir / "w.csv",
               "--threshold", "density"})
              .code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("distance output") {
    TempDir dir("distance");
    io::write_edgelist(generate_er(10, 0.4, 2), dir / "a.edgelist");
    const Run same = run({"distance", "--g1", dir / "a.edgelist", "--g2", dir / "a.edgelist", "--measure", "all"});
    REQUIRE(same.code == 0);
    const json arr = json::parse(same.out);
    REQUIRE(arr.size() == 10);
    for (const auto& e : arr) {
        CHECK(e["status"] == "ok");
        CHECK(e["value"].get<double>() <= 1e-9);
    }

    io::write_edgelist(complete_graph(3), dir / "k3.edgelist");
    io::write_edgelist(path_graph(3), dir / "p3.edgelist");
    const Run tsv = run({"distance", "--g1", dir / "k3.edgelist", "--g2", dir / "p3.edgelist", "--measure",
                         "hamming,frobenius", "--format", "tsv"});
    CHECK(tsv.code == 0);
    CHECK(tsv.out.rfind("measure\tvalue\tstatus\n", 0) == 0);
    CHECK(tsv.out.find("hamming\t0.33333333333333331\tok") != std::string::npos);

    io::write_edgelist(Graph::from_edges(3, {{0, 1}}), dir / "split.edgelist");
    const Run mixed = run({"distance", "--g1", dir / "k3.edgelist", "--g2", dir / "split.edgelist"});
    CHECK(mixed.code == 0);
    for (const auto& e : json::parse(mixed.out))
        if (e["measure"] == "resistance_perturbation") {
            CHECK(e["status"] == "precondition_failed");
            CHECK(e["value"].is_null());
        }
}

TEST_CASE("distance-matrix") {
    TempDir dir("matrix");
    fs::create_directories(dir.path / "graphs");
    io::write_edgelist(path_graph(3), dir / "graphs/a.edgelist");
    io::write_edgelist(complete_graph(3), dir / "graphs/b.edgelist");
    io::write_edgelist(complete_graph(4), dir / "graphs/c.edgelist");
    const Run r = run({"distance-matrix", "--dir", dir / "graphs", "--measure", "hamming", "--out", dir / "d.csv"});
    CHECK(r.code == 0);
    const Matrix d = io::read_matrix_csv(dir / "d.csv");
    REQUIRE(d.rows() == 3);
    CHECK(d(0, 1) == 1.0 / 3.0);
    CHECK(d(1, 0) == 1.0 / 3.0);
    CHECK(std::isnan(d(0, 2)));
    CHECK(std::isnan(d(2, 1)));
    CHECK(d.diagonal().isZero(0.0));
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(slurp(dir.path / "d.csv.index.txt") == "a.edgelist\nb.edgelist\nc.edgelist\n");

    fs::create_directories(dir.path / "one");
    io::write_edgelist(path_graph(5), dir / "one/x.edgelist");
    CHECK(run({"distance-matrix", "--dir", dir / "one", "--measure", "deltacon", "--out", dir / "one.csv"}).code == 0);
    CHECK(io::read_matrix_csv(dir / "one.csv") == Matrix::Zero(1, 1));

    fs::create_directories(dir.path / "empty");
    CHECK(run({"distance-matrix", "--dir", dir / "empty", "--measure", "hamming", "--out", dir / "e.csv"}).code == 2);
}

TEST_CASE("pipeline is deterministic across thread counts") {
    TempDir dir("pipeline");
    write_text(dir.path / "config.json", kConfig);

    auto run_with = [&](const char* threads, const std::string& out) {
        ::setenv("RECONET_THREADS", threads, 1);
        const Run r = run({"pipeline", "--config", dir / "config.json", "--out-dir", dir / out});
        ::unsetenv("RECONET_THREADS");
        return r;
    };
    REQUIRE(run_with("1", "a").code == 0);
    REQUIRE(run_with("1", "b").code == 0);
    REQUIRE(run_with("4", "c").code == 0);

    json reports[3];
    int k = 0;
    for (const char* out : {"a", "b", "c"}) {
        json j = json::parse(slurp(dir.path / out / "report.json"));
        CHECK_NOTHROW(validate_report(j));
        j["environment"].erase("timestamp");
        reports[k++] = j;
    }
    CHECK(reports[0] == reports[1]);
    CHECK(reports[0] == reports[2]);
    CHECK(reports[0]["methods"].size() == 6);

    for (const auto& entry : fs::directory_iterator(dir.path / "a")) {
        const auto name = entry.path().filename();
        if (name == "report.json") continue;
        CHECK(slurp(entry.path()) == slurp(dir.path / "b" / name));
        CHECK(slurp(entry.path()) == slurp(dir.path / "c" / name));
    }

    write_text(dir.path / "noseed.json", R"({"graph": {"model": "er", "nodes": 5}, "dynamics": {"model": "sis", "steps": 20},
                                          "reconstructors": [{"method": "correlation"}]})");
    CHECK(run({"pipeline", "--config", dir / "noseed.json", "--out-dir", dir / "d"}).code == 2);
    write_text(dir.path / "badmethod.json", R"({"seed": 1, "graph": {"model": "er", "nodes": 5}, "dynamics": {"model": "sis", "steps": 20},
                                             "reconstructors": [{"method": "nosuch"}]})");
    CHECK(run({"pipeline", "--config", dir / "badmethod.json", "--out-dir", dir / "d"}).code == 5);
    write_text(dir.path / "extra.json", R"({"seed": 1, "colour": "red", "graph": {"model": "er", "nodes": 5},
                                         "dynamics": {"model": "sis", "steps": 20}, "reconstructors": [{"method": "correlation"}]})");
    CHECK(run({"pipeline", "--config", dir / "extra.json", "--out-dir", dir / "d"}).code == 2);
}
