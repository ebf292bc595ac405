#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reconet/graph.hpp"

namespace reconet {

struct DistanceConfig {
    double gamma = 0.08;             // Ipsen-Mikhailov Lorentzian half-width
    double xi = 1.0;                 // HIM mixing weight
    int p = 1;                       // resistance perturbation norm exponent, 1 or 2
    std::size_t grid_points = 1 << 14;  // Ipsen-Mikhailov Simpson intervals

    void validate() const;
};

struct DistanceValue {
    std::string measure;
    double value = 0.0;
};

/// One row of a distance_all report. `status` is "ok" or the error kind name
/// (size_mismatch, precondition_failed, ...) with `value` empty.
struct DistanceEntry {
    std::string measure;
    std::string status;
    std::optional<double> value;
    std::string message;
};

DistanceValue dist_hamming(const Graph& g1, const Graph& g2);
DistanceValue dist_jaccard(const Graph& g1, const Graph& g2);
DistanceValue dist_frobenius(const Graph& g1, const Graph& g2);
DistanceValue dist_degree_jsd(const Graph& g1, const Graph& g2);
DistanceValue dist_laplacian_spectrum(const Graph& g1, const Graph& g2);
DistanceValue dist_ipsen_mikhailov(const Graph& g1, const Graph& g2, const DistanceConfig& cfg = {});
DistanceValue dist_him(const Graph& g1, const Graph& g2, const DistanceConfig& cfg = {});
DistanceValue dist_deltacon(const Graph& g1, const Graph& g2);
DistanceValue dist_resistance_perturbation(const Graph& g1, const Graph& g2,
                                           const DistanceConfig& cfg = {});
DistanceValue dist_netsimile(const Graph& g1, const Graph& g2);

/// Registry order used by distance_all and the CLI.
const std::vector<std::string>& distance_names();

DistanceValue distance(std::string_view measure, const Graph& g1, const Graph& g2,
                       const DistanceConfig& cfg = {});

/// Every registered measure; per-measure failures are embedded, never thrown.
std::vector<DistanceEntry> distance_all(const Graph& g1, const Graph& g2,
                                        const DistanceConfig& cfg = {});

// Building blocks exposed for inspection and tests.

/// Ipsen-Mikhailov spectral density of g evaluated on [0, omega_max] with
/// `intervals` uniform Simpson intervals (intervals + 1 samples).
std::vector<double> im_spectral_density(const Graph& g, double gamma, double omega_max,
                                        std::size_t intervals);

/// Oscillator frequencies sqrt(lambda) for the n - 1 largest Laplacian eigenvalues.
Vector im_frequencies(const Graph& g);

/// Upper integration limit used for a pair with largest frequency omega_top.
double im_integration_limit(double omega_top, double gamma);

/// Composite Simpson rule over uniform samples on [0, upper].
double simpson(const std::vector<double>& samples, double upper);

/// IM(empty_n, complete_n) for the given gamma and grid; cached per (n, gamma, grid).
double him_normalizer(std::size_t n, const DistanceConfig& cfg);

/// DeltaCon affinity (I + eps^2 D - eps A)^-1, negative round-off clamped.
Matrix deltacon_affinity(const Graph& g, double eps);

/// Effective resistance matrix from the Laplacian pseudoinverse.
Matrix effective_resistance(const Graph& g);

/// 7 features x 5 aggregates = 35 values.
std::vector<double> netsimile_signature(const Graph& g);

}  // namespace reconet
