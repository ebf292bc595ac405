#include "reconet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string_view>

#include "reconet/error.hpp"
#include "reconet/rng.hpp"

namespace reconet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_graph(const Graph& g) {
    if (g.directed())
        throw Error(ErrorKind::UnsupportedInput, "dynamics require an undirected graph");
}

void check_config(const DynamicsConfig& config, const char* model,
                  std::initializer_list<std::string_view> known) {
    if (config.steps < 2) throw Error(ErrorKind::Parameter, "steps must be at least 2");
    for (const auto& [name, value] : config.params) {
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw Error(ErrorKind::UnknownName,
                        "unknown parameter '" + name + "' for dynamics '" + model + "'");
        if (!std::isfinite(value))
            throw Error(ErrorKind::Parameter, "parameter '" + name + "' is not finite");
    }
}

void check_init(const InitialState& init, std::size_t n) {
    if (init && static_cast<std::size_t>(init->size()) != n)
        throw Error(ErrorKind::SizeMismatch, "initial state length differs from node count");
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorKind::Parameter, std::string(name) + " must lie in [0, 1]");
}

void check_spins(const Vector& s) {
    for (double v : s)
        if (v != 1.0 && v != -1.0) throw Error(ErrorKind::Parameter, "spin states must be +-1");
}

double wrap_phase(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

Vector random_spins(std::size_t n, Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    Vector s(n);
    for (std::size_t i = 0; i < n; ++i) s(i) = coin(rng) ? 1.0 : -1.0;
    return s;
}

// Neighbour lists once per simulation; dynamics ignore edge weights.
std::vector<std::vector<std::size_t>> adjacency_lists(const Graph& g) {
    std::vector<std::vector<std::size_t>> adj(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) adj[i] = g.neighbors(i);
    return adj;
}

}  // namespace

TimeSeries::TimeSeries(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1) throw Error(ErrorKind::Input, "time series needs at least one node");
    if (values_.cols() < 2) throw Error(ErrorKind::Input, "time series needs at least two steps");
    if (!values_.allFinite()) throw Error(ErrorKind::Input, "time series has non-finite entries");
}

double DynamicsConfig::param(const std::string& name, double fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

TimeSeries simulate_ising_glauber(const Graph& g, const DynamicsConfig& config,
                                  const InitialState& init) {
    check_graph(g);
    check_config(config, "ising", {"beta", "coupling"});
    const std::size_t n = g.n();
    check_init(init, n);
    const double beta = config.param("beta", 1.0);
    const double coupling = config.param("coupling", 1.0);
    if (beta < 0.0) throw Error(ErrorKind::Parameter, "beta must be non-negative");

    Rng rng = make_stream(config.seed, stream::kIsing);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector s = init ? *init : random_spins(n, rng);
    check_spins(s);

    const auto adj = adjacency_lists(g);
    Matrix out(n, config.steps);
    out.col(0) = s;
    Vector next(n);
    for (std::size_t t = 1; t < config.steps; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            double field = 0.0;
            for (std::size_t j : adj[i]) field += s(j);
            field *= coupling;
            const double flip = 1.0 / (1.0 + std::exp(2.0 * beta * s(i) * field));
            next(i) = unif(rng) < flip ? -s(i) : s(i);
        }
        s = next;
        out.col(t) = s;
    }
    return TimeSeries(std::move(out));
}

TimeSeries simulate_sis(const Graph& g, const DynamicsConfig& config, const InitialState& init) {
    check_graph(g);
    check_config(config, "sis", {"beta_inf", "mu", "init_frac"});
    const std::size_t n = g.n();
    check_init(init, n);
    const double beta_inf = config.param("beta_inf", 0.2);
    const double mu = config.param("mu", 0.1);
    const double init_frac = config.param("init_frac", 0.1);
    check_probability(beta_inf, "beta_inf");
    check_probability(mu, "mu");
    check_probability(init_frac, "init_frac");

    Rng rng = make_stream(config.seed, stream::kSis);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector x(n);
    if (init) {
        x = *init;
        for (double v : x)
            if (v != 0.0 && v != 1.0) throw Error(ErrorKind::Parameter, "SIS states must be 0/1");
    } else {
        for (std::size_t i = 0; i < n; ++i) x(i) = unif(rng) < init_frac ? 1.0 : 0.0;
    }

    const auto adj = adjacency_lists(g);
    Matrix out(n, config.steps);
    out.col(0) = x;
    Vector next(n);
    for (std::size_t t = 1; t < config.steps; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = unif(rng);
            if (x(i) == 1.0) {
                next(i) = u < mu ? 0.0 : 1.0;
            } else {
                double escape = 1.0;
                for (std::size_t j : adj[i])
                    if (x(j) == 1.0) escape *= 1.0 - beta_inf;
                next(i) = u < 1.0 - escape ? 1.0 : 0.0;
            }
        }
        x = next;
        out.col(t) = x;
    }
    return TimeSeries(std::move(out));
}

TimeSeries simulate_voter(const Graph& g, const DynamicsConfig& config, const InitialState& init) {
    check_graph(g);
    check_config(config, "voter", {});
    const std::size_t n = g.n();
    check_init(init, n);

    Rng rng = make_stream(config.seed, stream::kVoter);
    Vector s = init ? *init : random_spins(n, rng);
    check_spins(s);

    const auto adj = adjacency_lists(g);
    Matrix out(n, config.steps);
    out.col(0) = s;
    Vector next(n);
    for (std::size_t t = 1; t < config.steps; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            if (adj[i].empty()) {
                next(i) = s(i);
                continue;
            }
            std::uniform_int_distribution<std::size_t> pick(0, adj[i].size() - 1);
            next(i) = s(adj[i][pick(rng)]);
        }
        s = next;
        out.col(t) = s;
    }
    return TimeSeries(std::move(out));
}

TimeSeries simulate_random_walker(const Graph& g, const DynamicsConfig& config,
                                  const InitialState& init) {
    check_graph(g);
    check_config(config, "walker", {});
    const std::size_t n = g.n();
    check_init(init, n);

    Rng rng = make_stream(config.seed, stream::kWalker);
    std::size_t pos = 0;
    if (init) {
        Eigen::Index at = 0;
        if (init->sum() != 1.0 || init->maxCoeff(&at) != 1.0)
            throw Error(ErrorKind::Parameter, "walker initial state must be one-hot");
        pos = static_cast<std::size_t>(at);
    } else {
        pos = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }

    const auto adj = adjacency_lists(g);
    Matrix out = Matrix::Zero(n, config.steps);
    out(pos, 0) = 1.0;
    for (std::size_t t = 1; t < config.steps; ++t) {
        if (!adj[pos].empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, adj[pos].size() - 1);
            pos = adj[pos][pick(rng)];
        }
        out(pos, t) = 1.0;
    }
    return TimeSeries(std::move(out));
}

Vector kuramoto_frequencies(std::size_t n, const DynamicsConfig& config) {
    const double spread = config.param("omega_spread", 1.0);
    if (spread < 0.0) throw Error(ErrorKind::Parameter, "omega_spread must be non-negative");
    Rng rng = make_stream(config.seed, stream::kKuramoto);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vector omega(n);
    for (std::size_t i = 0; i < n; ++i) omega(i) = spread * unif(rng);
    return omega;
}

TimeSeries simulate_kuramoto(const Graph& g, const DynamicsConfig& config,
                             const InitialState& init,
                             const std::optional<Vector>& natural_frequencies) {
    check_graph(g);
    check_config(config, "kuramoto", {"coupling", "dt", "omega_spread"});
    const std::size_t n = g.n();
    check_init(init, n);
    const double coupling = config.param("coupling", 1.0);
    const double dt = config.param("dt", 0.05);
    if (dt <= 0.0) throw Error(ErrorKind::Parameter, "dt must be positive");
    if (natural_frequencies && static_cast<std::size_t>(natural_frequencies->size()) != n)
        throw Error(ErrorKind::SizeMismatch, "frequency vector length differs from node count");

    // Frequencies first, then phases, from one stream so kuramoto_frequencies
    // can reproduce the former.
    Vector omega = kuramoto_frequencies(n, config);
    Rng rng = make_stream(config.seed, stream::kKuramoto);
    std::uniform_real_distribution<double> skip(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) (void)skip(rng);
    if (natural_frequencies) omega = *natural_frequencies;

    Vector theta(n);
    if (init) {
        for (std::size_t i = 0; i < n; ++i) theta(i) = wrap_phase((*init)(i));
    } else {
        std::uniform_real_distribution<double> phase(0.0, kTwoPi);
        for (std::size_t i = 0; i < n; ++i) theta(i) = wrap_phase(phase(rng));
    }

    const auto adj = adjacency_lists(g);
    Matrix out(n, config.steps);
    out.col(0) = theta;
    Vector next(n);
    for (std::size_t t = 1; t < config.steps; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            double pull = 0.0;
            for (std::size_t j : adj[i]) pull += std::sin(theta(j) - theta(i));
            next(i) = wrap_phase(theta(i) + dt * (omega(i) + coupling * pull));
        }
        theta = next;
        out.col(t) = theta;
    }
    return TimeSeries(std::move(out));
}

TimeSeries simulate_diffusion(const Graph& g, const DynamicsConfig& config,
                              const InitialState& init) {
    check_graph(g);
    check_config(config, "diffusion", {"eps", "noise_sigma"});
    const std::size_t n = g.n();
    check_init(init, n);

    const Matrix lap = laplacian(g);
    const double d_max = lap.diagonal().maxCoeff();
    const double eps = config.param("eps", d_max > 0.0 ? 1.0 / (2.0 * d_max) : 0.0);
    const double sigma = config.param("noise_sigma", 0.05);
    if (sigma < 0.0) throw Error(ErrorKind::Parameter, "noise_sigma must be non-negative");
    if (eps < 0.0) throw Error(ErrorKind::Parameter, "eps must be non-negative");
    const double lambda_max = symmetric_eigen(lap).eigenvalues.maxCoeff();
    if (eps * lambda_max >= 2.0)
        throw Error(ErrorKind::Parameter, "eps * lambda_max(L) >= 2: diffusion step is unstable");

    Rng rng = make_stream(config.seed, stream::kDiffusion);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector x(n);
    if (init) {
        x = *init;
    } else {
        for (std::size_t i = 0; i < n; ++i) x(i) = normal(rng);
    }

    const Matrix step = Matrix::Identity(n, n) - eps * lap;
    Matrix out(n, config.steps);
    out.col(0) = x;
    for (std::size_t t = 1; t < config.steps; ++t) {
        Vector next = step * x;
        if (sigma > 0.0)
            for (std::size_t i = 0; i < n; ++i) next(i) += sigma * normal(rng);
        x = std::move(next);
        out.col(t) = x;
    }
    return TimeSeries(std::move(out));
}

const std::vector<std::string>& dynamics_names() {
    static const std::vector<std::string> names = {"ising", "sis", "voter",
                                                   "walker", "kuramoto", "diffusion"};
    return names;
}

TimeSeries simulate(std::string_view model, const Graph& g, const DynamicsConfig& config) {
    if (model == "ising") return simulate_ising_glauber(g, config);
    if (model == "sis") return simulate_sis(g, config);
    if (model == "voter") return simulate_voter(g, config);
    if (model == "walker") return simulate_random_walker(g, config);
    if (model == "kuramoto") return simulate_kuramoto(g, config);
    if (model == "diffusion") return simulate_diffusion(g, config);
    std::string valid;
    for (const auto& name : dynamics_names()) valid += (valid.empty() ? "" : ", ") + name;
    throw Error(ErrorKind::UnknownName,
                "unknown dynamics '" + std::string(model) + "'; valid: " + valid);
}

}  // namespace reconet
