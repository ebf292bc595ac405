#include "reconet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>

#include "reconet/error.hpp"
#include "reconet/io.hpp"
#include "reconet/parallel.hpp"
#include "reconet/reconstruction.hpp"

namespace reconet {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& what) {
    throw Error(ErrorKind::Parse, "pipeline config: " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) config_fail(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : keys) known = known || key == k;
        if (!known) config_fail("unknown key '" + key + "' in " + where);
    }
}

ParamMap read_params(const json& obj, const std::string& where) {
    ParamMap out;
    if (obj.is_null()) return out;
    if (!obj.is_object()) config_fail(where + " must be an object of numbers");
    for (const auto& [key, value] : obj.items()) {
        if (!value.is_number()) config_fail(where + "." + key + " must be a number");
        out[key] = value.get<double>();
    }
    return out;
}

std::size_t read_count(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) config_fail(where + "." + key + " is required");
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) config_fail(where + "." + key + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::size_t integer_param(const ParamMap& params, const char* key, const std::string& model) {
    auto it = params.find(key);
    if (it == params.end())
        throw Error(ErrorKind::Parameter, "generator '" + model + "' needs parameter " + key);
    if (!(it->second >= 0.0) || it->second != std::floor(it->second))
        throw Error(ErrorKind::Parameter, std::string(key) + " must be a non-negative integer");
    return static_cast<std::size_t>(it->second);
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json params_json(const ParamMap& params) {
    json out = json::object();
    for (const auto& [k, v] : params) out[k] = v;
    return out;
}

json score_json(const EdgeScoreReport& s) {
    return {{"tp", s.tp},
            {"fp", s.fp},
            {"fn", s.fn},
            {"tn", s.tn},
            {"precision", s.precision},
            {"recall", s.recall},
            {"f1", s.f1},
            {"auc", s.auc},
            {"auc_degenerate", s.auc_degenerate},
            {"tie_at_cut", s.tie_at_cut}};
}

std::string method_stem(std::size_t k, const std::string& method) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu_", k);
    return buf + method;
}

}  // namespace

PipelineConfig parse_pipeline_config(const json& j, const std::filesystem::path& base_dir) {
    only_keys(j, "config", {"seed", "graph", "dynamics", "reconstructors", "threshold", "out_dir"});
    PipelineConfig cfg;

    if (!j.contains("seed")) config_fail("seed is required");
    if (!j.at("seed").is_number_unsigned()) config_fail("seed must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();

    if (!j.contains("graph")) config_fail("graph is required");
    const json& g = j.at("graph");
    only_keys(g, "graph", {"model", "nodes", "params", "file"});
    if (g.contains("file")) {
        if (g.contains("model")) config_fail("graph takes either file or model, not both");
        if (!g.at("file").is_string()) config_fail("graph.file must be a string");
        std::filesystem::path file = g.at("file").get<std::string>();
        cfg.graph.file = file.is_relative() && !base_dir.empty() ? base_dir / file : file;
    } else {
        if (!g.contains("model") || !g.at("model").is_string())
            config_fail("graph.model must be a string");
        cfg.graph.model = g.at("model").get<std::string>();
        if (cfg.graph.model != "er" && cfg.graph.model != "ba" && cfg.graph.model != "ring")
            throw Error(ErrorKind::UnknownName,
                        "unknown graph model '" + cfg.graph.model + "'; valid: er, ba, ring");
        cfg.graph.nodes = read_count(g, "nodes", "graph");
        cfg.graph.params = read_params(g.value("params", json()), "graph.params");
    }

    if (!j.contains("dynamics")) config_fail("dynamics is required");
    const json& d = j.at("dynamics");
    only_keys(d, "dynamics", {"model", "steps", "params", "transform"});
    if (!d.contains("model") || !d.at("model").is_string())
        config_fail("dynamics.model must be a string");
    cfg.dynamics = d.at("model").get<std::string>();
    const auto& models = dynamics_names();
    if (std::find(models.begin(), models.end(), cfg.dynamics) == models.end()) {
        std::string valid;
        for (const auto& name : models) valid += (valid.empty() ? "" : ", ") + name;
        throw Error(ErrorKind::UnknownName,
                    "unknown dynamics '" + cfg.dynamics + "'; valid: " + valid);
    }
    cfg.steps = read_count(d, "steps", "dynamics");
    if (cfg.steps < 2) config_fail("dynamics.steps must be at least 2");
    cfg.dynamics_params = read_params(d.value("params", json()), "dynamics.params");
    const std::string transform = d.value("transform", std::string("none"));
    if (transform != "none" && transform != "sin")
        config_fail("dynamics.transform must be 'none' or 'sin'");
    cfg.sin_transform = transform == "sin";

    if (!j.contains("reconstructors") || !j.at("reconstructors").is_array() ||
        j.at("reconstructors").empty())
        config_fail("reconstructors must be a non-empty array");
    for (const json& m : j.at("reconstructors")) {
        only_keys(m, "reconstructor", {"method", "params"});
        if (!m.contains("method") || !m.at("method").is_string())
            config_fail("reconstructor.method must be a string");
        MethodSpec spec{m.at("method").get<std::string>(),
                        read_params(m.value("params", json()), "reconstructor.params")};
        const auto& names = reconstruction_names();
        if (std::find(names.begin(), names.end(), spec.method) == names.end()) {
            std::string valid;
            for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
            throw Error(ErrorKind::UnknownName,
                        "unknown method '" + spec.method + "'; valid: " + valid);
        }
        cfg.methods.push_back(std::move(spec));
    }

    if (j.contains("threshold")) {
        if (!j.at("threshold").is_string()) config_fail("threshold must be a string");
        cfg.threshold = parse_threshold(j.at("threshold").get<std::string>());
    }
    if (j.contains("out_dir")) {
        if (!j.at("out_dir").is_string()) config_fail("out_dir must be a string");
        cfg.out_dir = j.at("out_dir").get<std::string>();
    }
    return cfg;
}

PipelineConfig read_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    return parse_pipeline_config(j, path.parent_path());
}

Graph build_graph(const GraphSource& source, std::uint64_t seed) {
    if (source.file) return io::read_edgelist(*source.file);
    const auto only = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : source.params) {
            bool ok = false;
            for (const char* key : keys) ok = ok || k == key;
            if (!ok)
                throw Error(ErrorKind::UnknownName,
                            "unknown parameter '" + k + "' for generator '" + source.model + "'");
        }
    };
    if (source.model == "er") {
        only({"p"});
        auto it = source.params.find("p");
        if (it == source.params.end()) throw Error(ErrorKind::Parameter, "generator 'er' needs parameter p");
        return generate_er(source.nodes, it->second, seed);
    }
    if (source.model == "ba") {
        only({"m"});
        return generate_ba(source.nodes, integer_param(source.params, "m", "ba"), seed);
    }
    if (source.model == "ring") {
        only({"k"});
        return generate_ring(source.nodes, integer_param(source.params, "k", "ring"));
    }
    throw Error(ErrorKind::UnknownName,
                "unknown graph model '" + source.model + "'; valid: er, ba, ring");
}

json run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + out_dir.string() + "': " + ec.message());

    const Graph truth = build_graph(config.graph, config.seed);
    if (truth.directed()) throw Error(ErrorKind::UnsupportedInput, "ground truth must be undirected");
    io::write_edgelist(truth, out_dir / "truth.edgelist");

    DynamicsConfig dyn{config.steps, config.seed, config.dynamics_params};
    const TimeSeries ts = simulate(config.dynamics, truth, dyn);
    io::write_matrix_csv(ts.values(), out_dir / "ts.csv");
    const TimeSeries input =
        config.sin_transform ? TimeSeries(ts.values().array().sin().matrix()) : ts;

    struct Outcome {
        ReconstructionResult result;
        EdgeScoreReport score;
        std::string weights_file, graph_file;
    };
    std::vector<Outcome> outcomes(config.methods.size());
    parallel_for(config.methods.size(), [&](std::size_t k) {
        const MethodSpec& spec = config.methods[k];
        Outcome& o = outcomes[k];
        o.result = reconstruct(spec.method, input, spec.params);
        const Graph predicted = apply_threshold(truth, o.result, config.threshold);
        o.score = score_reconstruction(truth, o.result, config.threshold);
        const std::string stem = method_stem(k, spec.method);
        o.weights_file = "W_" + stem + ".csv";
        o.graph_file = "G_" + stem + ".edgelist";
        io::write_matrix_csv(o.result.weights, out_dir / o.weights_file);
        io::write_edgelist(predicted, out_dir / o.graph_file);
    });

    json methods = json::array();
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const Outcome& o = outcomes[k];
        ParamMap params = config.methods[k].params;
        for (const auto& [key, value] : o.result.params) params.try_emplace(key, value);
        methods.push_back({{"method", config.methods[k].method},
                           {"params", params_json(params)},
                           {"directed", o.result.directed},
                           {"converged", o.result.converged},
                           {"weights_file", o.weights_file},
                           {"graph_file", o.graph_file},
                           {"score", score_json(o.score)}});
    }

    json report = {
        {"schema", kReportSchemaId},
        {"environment", {{"tool_version", kToolVersion}, {"seed", config.seed}, {"timestamp", timestamp_utc()}}},
        {"graph",
         {{"source", config.graph.file ? std::string("file") : config.graph.model},
          {"nodes", truth.n()},
          {"edges", truth.edge_count()}}},
        {"dynamics",
         {{"model", config.dynamics},
          {"steps", config.steps},
          {"params", params_json(config.dynamics_params)},
          {"transform", config.sin_transform ? "sin" : "none"}}},
        {"threshold", to_string(config.threshold)},
        {"methods", methods}};
    validate_report(report);

    std::ofstream out(out_dir / "report.json", std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write report.json");
    out << report.dump(2) << '\n';
    return report;
}

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::Parse, "report schema: " + path + ": " + what);
}

void exact_keys(const json& obj, const std::string& path, const std::set<std::string>& keys) {
    if (!obj.is_object()) schema_fail(path, "expected object");
    for (const auto& [key, value] : obj.items())
        if (!keys.count(key)) schema_fail(path, "unknown field '" + key + "'");
    for (const auto& key : keys)
        if (!obj.contains(key)) schema_fail(path, "missing field '" + key + "'");
}

void expect(bool ok, const std::string& path, const std::string& what) {
    if (!ok) schema_fail(path, what);
}

void expect_unit(const json& v, const std::string& path) {
    expect(v.is_number() && std::isfinite(v.get<double>()) && v.get<double>() >= 0.0 &&
               v.get<double>() <= 1.0,
           path, "expected a number in [0, 1]");
}

void expect_number_map(const json& v, const std::string& path) {
    expect(v.is_object(), path, "expected object");
    for (const auto& [key, value] : v.items())
        expect(value.is_number() && std::isfinite(value.get<double>()), path + "." + key,
               "expected finite number");
}

}  // namespace

void validate_report(const json& report) {
    exact_keys(report, "$", {"schema", "environment", "graph", "dynamics", "threshold", "methods"});
    expect(report["schema"] == kReportSchemaId, "$.schema", "unexpected schema id");

    const json& env = report["environment"];
    exact_keys(env, "$.environment", {"tool_version", "seed", "timestamp"});
    expect(env["tool_version"].is_string(), "$.environment.tool_version", "expected string");
    expect(env["seed"].is_number_unsigned(), "$.environment.seed", "expected unsigned integer");
    expect(env["timestamp"].is_string(), "$.environment.timestamp", "expected string");

    const json& g = report["graph"];
    exact_keys(g, "$.graph", {"source", "nodes", "edges"});
    expect(g["source"].is_string(), "$.graph.source", "expected string");
    expect(g["nodes"].is_number_unsigned() && g["nodes"].get<std::size_t>() >= 1, "$.graph.nodes",
           "expected positive integer");
    expect(g["edges"].is_number_unsigned(), "$.graph.edges", "expected unsigned integer");

    const json& d = report["dynamics"];
    exact_keys(d, "$.dynamics", {"model", "steps", "params", "transform"});
    expect(d["model"].is_string(), "$.dynamics.model", "expected string");
    expect(d["steps"].is_number_unsigned() && d["steps"].get<std::size_t>() >= 2,
           "$.dynamics.steps", "expected integer >= 2");
    expect_number_map(d["params"], "$.dynamics.params");
    expect(d["transform"] == "none" || d["transform"] == "sin", "$.dynamics.transform",
           "expected 'none' or 'sin'");

    expect(report["threshold"].is_string(), "$.threshold", "expected string");
    expect(report["methods"].is_array() && !report["methods"].empty(), "$.methods",
           "expected non-empty array");

    const std::size_t n = g["nodes"].get<std::size_t>();
    const std::size_t pairs = n * (n - 1) / 2;
    for (std::size_t k = 0; k < report["methods"].size(); ++k) {
        const json& m = report["methods"][k];
        const std::string path = "$.methods[" + std::to_string(k) + "]";
        exact_keys(m, path,
                   {"method", "params", "directed", "converged", "weights_file", "graph_file", "score"});
        expect(m["method"].is_string(), path + ".method", "expected string");
        expect_number_map(m["params"], path + ".params");
        expect(m["directed"].is_boolean(), path + ".directed", "expected boolean");
        expect(m["converged"].is_boolean(), path + ".converged", "expected boolean");
        expect(m["weights_file"].is_string(), path + ".weights_file", "expected string");
        expect(m["graph_file"].is_string(), path + ".graph_file", "expected string");
        const json& s = m["score"];
        exact_keys(s, path + ".score",
                   {"tp", "fp", "fn", "tn", "precision", "recall", "f1", "auc", "auc_degenerate",
                    "tie_at_cut"});
        std::size_t total = 0;
        for (const char* c : {"tp", "fp", "fn", "tn"}) {
            expect(s[c].is_number_unsigned(), path + ".score." + c, "expected unsigned integer");
            total += s[c].get<std::size_t>();
        }
        expect(total == pairs, path + ".score", "confusion counts must sum to N(N-1)/2");
        for (const char* c : {"precision", "recall", "f1", "auc"}) expect_unit(s[c], path + ".score." + c);
        expect(s["auc_degenerate"].is_boolean(), path + ".score.auc_degenerate", "expected boolean");
        expect(s["tie_at_cut"].is_boolean(), path + ".score.tie_at_cut", "expected boolean");
    }
}

}  // namespace reconet
