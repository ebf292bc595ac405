#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reconet/dynamics.hpp"
#include "reconet/evaluation.hpp"
#include "reconet/graph.hpp"

namespace reconet {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kReportSchemaId = "reconet.experiment_report/1";

struct GraphSource {
    std::string model;  // er | ba | ring, empty when loading from file
    std::size_t nodes = 0;
    ParamMap params;    // er: p, ba: m, ring: k
    std::optional<std::filesystem::path> file;
};

struct MethodSpec {
    std::string method;
    ParamMap params;
};

/// Pipeline configuration, read from JSON:
///
///   {
///     "seed": 7,
///     "graph": {"model": "ring", "nodes": 20, "params": {"k": 4}},   // or {"file": "g.txt"}
///     "dynamics": {"model": "diffusion", "steps": 2000,
///                  "params": {"noise_sigma": 0.05}, "transform": "none"},
///     "reconstructors": [{"method": "correlation", "params": {}}],
///     "threshold": "density",
///     "out_dir": "runs/a"                                               // optional
///   }
///
/// Unknown keys are rejected. `transform` is "none" or "sin" (applied to the
/// series before reconstruction, useful for Kuramoto phases).
struct PipelineConfig {
    std::uint64_t seed = 0;
    GraphSource graph;
    std::string dynamics;
    std::size_t steps = 0;
    ParamMap dynamics_params;
    bool sin_transform = false;
    std::vector<MethodSpec> methods;
    ThresholdSpec threshold = MatchDensityThreshold{};
    std::optional<std::filesystem::path> out_dir;
};

/// Relative file paths inside the config resolve against `base_dir`.
PipelineConfig parse_pipeline_config(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir = {});
PipelineConfig read_pipeline_config(const std::filesystem::path& path);

Graph build_graph(const GraphSource& source, std::uint64_t seed);

/// Runs generate -> simulate -> reconstruct -> threshold -> score, writing
///   truth.edgelist, ts.csv, W_<k>_<method>.csv, G_<k>_<method>.edgelist, report.json
/// into out_dir. Methods run concurrently; the report is written once at the end.
nlohmann::json run_pipeline(const PipelineConfig& config, const std::filesystem::path& out_dir);

/// Structural check against the published report schema (docs/report.schema.json):
/// exact key sets, JSON types, and value ranges. Throws ErrorKind::Parse.
void validate_report(const nlohmann::json& report);

}  // namespace reconet
