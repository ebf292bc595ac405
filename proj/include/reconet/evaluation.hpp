#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "reconet/graph.hpp"
#include "reconet/reconstruction.hpp"

namespace reconet {

struct EdgeScoreReport {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.5;
    bool auc_degenerate = false;  // truth had no edges or no non-edges
    bool tie_at_cut = false;      // quantile cut split a group of equal scores
};

struct AucResult {
    double value = 0.5;
    bool degenerate = false;
};

struct QuantileThreshold { double q; };
struct AbsoluteThreshold { double tau; };
struct DegreeThreshold { double k_avg; };
/// Quantile equal to the ground-truth edge density.
struct MatchDensityThreshold {};

using ThresholdSpec =
    std::variant<QuantileThreshold, AbsoluteThreshold, DegreeThreshold, MatchDensityThreshold>;

/// Parses "quantile:q", "abs:tau", "degree:k" or "density".
ThresholdSpec parse_threshold(const std::string& text);
std::string to_string(const ThresholdSpec& spec);

/// Mann-Whitney AUC with average ranks over unordered pairs; directed
/// results are max-symmetrised first.
AucResult auc_score(const Graph& truth, const ReconstructionResult& r);

/// Confusion counts of `thresholded` against `truth` over unordered pairs,
/// with auc filled from auc_score(truth, r).
EdgeScoreReport confusion_at_threshold(const Graph& truth, const ReconstructionResult& r,
                                       const Graph& thresholded);

/// Threshold a result (after max-symmetrisation) for comparison with truth.
Graph apply_threshold(const Graph& truth, const ReconstructionResult& r, const ThresholdSpec& spec);

EdgeScoreReport score_reconstruction(const Graph& truth, const ReconstructionResult& r,
                                     const ThresholdSpec& spec);

}  // namespace reconet
