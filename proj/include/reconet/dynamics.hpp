#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reconet/graph.hpp"

namespace reconet {

/// N x L node activity matrix; row i is node i, column t is timestep t.
class TimeSeries {
public:
    /// Validates shape (N >= 1, L >= 2) and finiteness.
    explicit TimeSeries(Matrix values);

    std::size_t n_nodes() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t n_steps() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    const Matrix& values() const noexcept { return values_; }

private:
    Matrix values_;
};

using ParamMap = std::map<std::string, double>;

struct DynamicsConfig {
    std::size_t steps = 100;
    std::uint64_t seed = 0;
    ParamMap params;

    double param(const std::string& name, double fallback) const;
};

/// Optional explicit column 0. When absent the initial condition is drawn
/// from the config seed, which is what the CLI and pipeline always do.
using InitialState = std::optional<Vector>;

// Parameters and defaults:
//   ising:     beta = 1, coupling = 1
//   sis:       beta_inf = 0.2, mu = 0.1, init_frac = 0.1
//   voter:     (none)
//   walker:    (none)
//   kuramoto:  coupling = 1, dt = 0.05, omega_spread = 1
//   diffusion: eps = 1 / (2 d_max), noise_sigma = 0.05
TimeSeries simulate_ising_glauber(const Graph& g, const DynamicsConfig& config,
                                  const InitialState& init = std::nullopt);
TimeSeries simulate_sis(const Graph& g, const DynamicsConfig& config,
                        const InitialState& init = std::nullopt);
TimeSeries simulate_voter(const Graph& g, const DynamicsConfig& config,
                          const InitialState& init = std::nullopt);
/// Walker start node can be pinned with init = one-hot vector.
TimeSeries simulate_random_walker(const Graph& g, const DynamicsConfig& config,
                                  const InitialState& init = std::nullopt);
TimeSeries simulate_kuramoto(const Graph& g, const DynamicsConfig& config,
                             const InitialState& init = std::nullopt,
                             const std::optional<Vector>& natural_frequencies = std::nullopt);
TimeSeries simulate_diffusion(const Graph& g, const DynamicsConfig& config,
                              const InitialState& init = std::nullopt);

/// Natural frequencies drawn by simulate_kuramoto for this config.
Vector kuramoto_frequencies(std::size_t n, const DynamicsConfig& config);

const std::vector<std::string>& dynamics_names();

/// Dispatch by registry name; unknown names throw ErrorKind::UnknownName.
TimeSeries simulate(std::string_view model, const Graph& g, const DynamicsConfig& config);

}  // namespace reconet
