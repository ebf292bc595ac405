#include "reconet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reconet/distances.hpp"
#include "reconet/dynamics.hpp"
#include "reconet/error.hpp"
#include "reconet/evaluation.hpp"
#include "reconet/io.hpp"
#include "reconet/pipeline.hpp"
#include "reconet/reconstruction.hpp"

namespace reconet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ParamMap parse_params(const std::vector<std::string>& items) {
    ParamMap out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error(ErrorKind::Parse, "--param expects key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        char* end = nullptr;
        const double value = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value))
            throw Error(ErrorKind::Parse, "--param " + key + ": '" + text + "' is not a finite number");
        out[key] = value;
    }
    return out;
}

DistanceConfig distance_config(const ParamMap& params) {
    DistanceConfig cfg;
    for (const auto& [key, value] : params) {
        if (key == "gamma") cfg.gamma = value;
        else if (key == "xi") cfg.xi = value;
        else if (key == "p") {
            if (value != 1.0 && value != 2.0) throw Error(ErrorKind::Parameter, "p must be 1 or 2");
            cfg.p = static_cast<int>(value);
        } else if (key == "grid_points") {
            if (!(value >= 0.0) || value != std::floor(value))
                throw Error(ErrorKind::Parameter, "grid_points must be a non-negative integer");
            cfg.grid_points = static_cast<std::size_t>(value);
        } else {
            throw Error(ErrorKind::UnknownName,
                        "unknown distance parameter '" + key + "'; valid: gamma, xi, p, grid_points");
        }
    }
    cfg.validate();
    return cfg;
}

std::vector<std::string> split_measures(const std::string& text) {
    if (text == "all") return distance_names();
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (const auto& m : out) {
        const auto& names = distance_names();
        if (std::find(names.begin(), names.end(), m) == names.end()) {
            std::string valid;
            for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
            throw Error(ErrorKind::UnknownName, "unknown measure '" + m + "'; valid: " + valid + ", all");
        }
    }
    return out;
}

json entry_json(const DistanceEntry& e) {
    json j = {{"measure", e.measure}, {"status", e.status}};
    j["value"] = e.value ? json(*e.value) : json(nullptr);
    return j;
}

void emit_distances(const std::vector<DistanceEntry>& entries, const std::string& format,
                    std::ostream& out) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& e : entries) arr.push_back(entry_json(e));
        out << arr.dump(2) << '\n';
    } else {
        out << "measure\tvalue\tstatus\n";
        for (const auto& e : entries)
            out << e.measure << '\t' << (e.value ? io::format_double(*e.value) : "nan") << '\t'
                << e.status << '\n';
    }
}

std::vector<fs::path> graph_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "'" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    if (files.empty()) throw Error(ErrorKind::Parse, "no graph files in '" + dir.string() + "'");
    return files;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulate network dynamics, reconstruct networks from time series, and compare graphs",
                 "reconet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::vector<std::string> params;

    // generate
    std::string gen_model, gen_out;
    std::size_t gen_nodes = 0;
    std::uint64_t gen_seed = 0;
    auto* generate = app.add_subcommand("generate", "Generate a random graph");
    generate->add_option("--model", gen_model, "er | ba | ring")->required();
    generate->add_option("--nodes", gen_nodes, "Node count")->required();
    generate->add_option("--param", params, "Generator parameter k=v (er: p, ba: m, ring: k)");
    generate->add_option("--seed", gen_seed, "Random seed")->required();
    generate->add_option("--out", gen_out, "Output edge list")->required();

    // simulate
    std::string sim_graph, sim_model, sim_out;
    std::size_t sim_steps = 0;
    std::uint64_t sim_seed = 0;
    auto* sim = app.add_subcommand("simulate", "Simulate node dynamics on a graph");
    sim->add_option("--graph", sim_graph, "Input edge list")->required();
    sim->add_option("--dynamics", sim_model, "ising | sis | voter | walker | kuramoto | diffusion")
        ->required();
    sim->add_option("--steps", sim_steps, "Number of timesteps L")->required();
    sim->add_option("--param", params, "Model parameter k=v");
    sim->add_option("--seed", sim_seed, "Random seed")->required();
    sim->add_option("--out", sim_out, "Output time series CSV (N rows x L columns)")->required();

    // reconstruct
    std::string rec_ts, rec_method, rec_out, rec_threshold, rec_graph_out;
    auto* rec = app.add_subcommand("reconstruct", "Reconstruct a weight matrix from a time series");
    rec->add_option("--ts", rec_ts, "Time series CSV")->required();
    rec->add_option("--method", rec_method, "Reconstruction method")->required();
    rec->add_option("--param", params, "Method parameter k=v");
    rec->add_option("--out", rec_out, "Output weight matrix CSV")->required();
    rec->add_option("--threshold", rec_threshold, "quantile:q | abs:tau | degree:k");
    rec->add_option("--graph-out", rec_graph_out, "Thresholded graph edge list");

    // distance
    std::string dist_g1, dist_g2, dist_measure = "all", dist_format = "json";
    auto* dist = app.add_subcommand("distance", "Compare two graphs");
    dist->add_option("--g1", dist_g1, "First edge list")->required();
    dist->add_option("--g2", dist_g2, "Second edge list")->required();
    dist->add_option("--measure", dist_measure, "Comma-separated measures or 'all'");
    dist->add_option("--param", params, "gamma, xi, p, grid_points");
    dist->add_option("--format", dist_format, "json | tsv")
        ->check(CLI::IsMember({"json", "tsv"}));

    // distance-matrix
    std::string dm_dir, dm_measure, dm_out, dm_index;
    auto* dm = app.add_subcommand("distance-matrix", "Pairwise distance matrix over a directory of graphs");
    dm->add_option("--dir", dm_dir, "Directory of edge lists")->required();
    dm->add_option("--measure", dm_measure, "Distance measure")->required();
    dm->add_option("--param", params, "gamma, xi, p, grid_points");
    dm->add_option("--out", dm_out, "Output K x K matrix CSV")->required();
    dm->add_option("--index", dm_index, "Filename index output (default: <out>.index.txt)");

    // pipeline
    std::string pipe_config, pipe_out_dir;
    auto* pipe = app.add_subcommand("pipeline", "Run generate -> simulate -> reconstruct -> score");
    pipe->add_option("--config", pipe_config, "Pipeline JSON config")->required();
    pipe->add_option("--out-dir", pipe_out_dir, "Output directory (overrides config out_dir)");

    std::vector<const char*> argv{"reconet"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return 0;
    } catch (const CLI::ExtrasError& e) {
        err << "error: " << e.what() << '\n';
        return 5;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        const ParamMap param_map = parse_params(params);

        if (*generate) {
            GraphSource source{gen_model, gen_nodes, param_map, std::nullopt};
            io::write_edgelist(build_graph(source, gen_seed), gen_out);
        } else if (*sim) {
            const Graph g = io::read_edgelist(sim_graph);
            const TimeSeries ts = simulate(sim_model, g, DynamicsConfig{sim_steps, sim_seed, param_map});
            io::write_matrix_csv(ts.values(), sim_out);
        } else if (*rec) {
            if (!rec_graph_out.empty() && rec_threshold.empty())
                throw Error(ErrorKind::Parse, "--graph-out requires --threshold");
            std::optional<ThresholdSpec> spec;
            if (!rec_threshold.empty()) {
                spec = parse_threshold(rec_threshold);
                if (std::holds_alternative<MatchDensityThreshold>(*spec))
                    throw Error(ErrorKind::Parse, "'density' needs a ground truth; use it in pipeline configs");
            }
            const TimeSeries ts(io::read_matrix_csv(rec_ts));
            const ReconstructionResult r = reconstruct(rec_method, ts, param_map);
            io::write_matrix_csv(r.weights, rec_out);
            if (spec) {
                Graph thresholded(1);
                if (auto* q = std::get_if<QuantileThreshold>(&*spec)) thresholded = threshold_quantile(r, q->q);
                else if (auto* a = std::get_if<AbsoluteThreshold>(&*spec)) thresholded = threshold_absolute(r, a->tau);
                else thresholded = threshold_target_degree(r, std::get<DegreeThreshold>(*spec).k_avg);
                if (rec_graph_out.empty())
                    io::format_edgelist(thresholded, out);
                else
                    io::write_edgelist(thresholded, rec_graph_out);
            }
            if (!r.converged) err << "warning: " << r.method << " did not converge\n";
        } else if (*dist) {
            const Graph g1 = io::read_edgelist(dist_g1);
            const Graph g2 = io::read_edgelist(dist_g2);
            const DistanceConfig cfg = distance_config(param_map);
            if (dist_measure == "all") {
                emit_distances(distance_all(g1, g2, cfg), dist_format, out);
            } else {
                std::vector<DistanceEntry> entries;
                for (const auto& m : split_measures(dist_measure))
                    entries.push_back({m, "ok", distance(m, g1, g2, cfg).value, ""});
                emit_distances(entries, dist_format, out);
            }
        } else if (*dm) {
            const DistanceConfig cfg = distance_config(param_map);
            split_measures(dm_measure);  // validates the name
            const auto files = graph_files(dm_dir);
            std::vector<Graph> graphs;
            for (const auto& f : files) graphs.push_back(io::read_edgelist(f));
            const std::size_t k = graphs.size();
            Matrix m = Matrix::Zero(k, k);
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = a + 1; b < k; ++b) {
                    double v = std::nan("");
                    try {
                        v = distance(dm_measure, graphs[a], graphs[b], cfg).value;
                    } catch (const Error& e) {
                        err << "warning: " << files[a].filename().string() << " vs "
                            << files[b].filename().string() << ": " << e.what() << '\n';
                    }
                    m(a, b) = m(b, a) = v;
                }
            io::write_matrix_csv(m, dm_out);
            const fs::path index = dm_index.empty() ? fs::path(dm_out + ".index.txt") : fs::path(dm_index);
            std::ofstream idx(index, std::ios::binary | std::ios::trunc);
            if (!idx) throw Error(ErrorKind::Io, "cannot write '" + index.string() + "'");
            for (const auto& f : files) idx << f.filename().string() << '\n';
        } else if (*pipe) {
            PipelineConfig cfg = read_pipeline_config(pipe_config);
            fs::path out_dir = !pipe_out_dir.empty() ? fs::path(pipe_out_dir)
                               : cfg.out_dir        ? *cfg.out_dir
                                                    : fs::path();
            if (out_dir.empty()) throw Error(ErrorKind::Parse, "pipeline needs --out-dir or out_dir in config");
            run_pipeline(cfg, out_dir);
        }
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace reconet
