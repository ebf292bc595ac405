#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "reconet/dynamics.hpp"
#include "reconet/graph.hpp"

namespace reconet {

/// Scores for every ordered node pair. For directed methods weights(i, j)
/// scores the influence i -> j; undirected methods fill both triangles.
struct ReconstructionResult {
    std::string method;
    Matrix weights;
    bool directed = false;
    ParamMap params;
    bool converged = true;
};

enum class CorrelationMode { Signed, Absolute };
enum class IsingVariant { NaiveMeanField, Tap };

/// Smallest admissible series length for any reconstructor.
inline constexpr std::size_t kMinSteps = 10;

ReconstructionResult reconstruct_correlation(const TimeSeries& ts,
                                             CorrelationMode mode = CorrelationMode::Absolute);

/// Precision-matrix partial correlation from the 1/L covariance.
ReconstructionResult reconstruct_partial_correlation(const TimeSeries& ts);

struct GraphicalLassoOptions {
    double alpha = 0.01;
    double tol = 1e-4;
    std::size_t max_sweeps = 100;
};

/// Block coordinate descent (column-by-column lasso) on the penalised
/// log-likelihood; the diagonal of the precision matrix is not penalised.
/// Hitting max_sweeps returns the current iterate with converged = false.
ReconstructionResult reconstruct_graphical_lasso(const TimeSeries& ts,
                                                 const GraphicalLassoOptions& options = {});

/// Plug-in mutual information in bits after equal-width binning of each row.
ReconstructionResult reconstruct_mutual_information(const TimeSeries& ts, std::size_t bins = 8);

/// Pairwise Granger score ln(RSS_restricted / RSS_full), clamped at zero.
ReconstructionResult reconstruct_granger(const TimeSeries& ts, std::size_t order = 1);

/// History-1 transfer entropy in bits on median-binarised rows.
ReconstructionResult reconstruct_transfer_entropy(const TimeSeries& ts);

/// Inverse Ising by naive mean field or TAP; requires +-1 entries.
ReconstructionResult reconstruct_mean_field_ising(const TimeSeries& ts,
                                                  IsingVariant variant = IsingVariant::Tap);

const std::vector<std::string>& reconstruction_names();

/// Registry dispatch with named parameters:
///   correlation (mode: 0 signed, 1 absolute), partial_correlation,
///   graphical_lasso (alpha, tol, max_sweeps), mutual_information (bins),
///   granger (order), transfer_entropy, mean_field_ising (variant: 0 nmf, 1 tap).
ReconstructionResult reconstruct(std::string_view method, const TimeSeries& ts,
                                 const ParamMap& params = {});

/// Keeps the ceil(q * P) largest |weights| among the P candidate pairs
/// (upper triangle when undirected, all ordered pairs when directed).
/// Ties at the cut keep lexicographically earlier pairs. Kept edges get weight 1.
Graph threshold_quantile(const ReconstructionResult& r, double q);

/// Edge iff |weight| > tau.
Graph threshold_absolute(const ReconstructionResult& r, double tau);

/// Quantile threshold aimed at mean degree k_avg.
Graph threshold_target_degree(const ReconstructionResult& r, double k_avg);

/// Number of pairs a quantile threshold keeps for (q, P).
std::size_t quantile_keep_count(double q, std::size_t candidates);

/// Undirected view of a result: w'(i, j) = max(|w(i, j)|, |w(j, i)|).
ReconstructionResult symmetrize_max(const ReconstructionResult& r);

}  // namespace reconet
