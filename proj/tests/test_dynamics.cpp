#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reconet/dynamics.hpp"
#include "reconet/error.hpp"

using namespace reconet;

namespace {

bool all_in(const Matrix& m, std::initializer_list<double> allowed) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        bool ok = false;
        for (double a : allowed) ok = ok || m.data()[i] == a;
        if (!ok) return false;
    }
    return true;
}

DynamicsConfig cfg(std::size_t steps, std::uint64_t seed, ParamMap params = {}) {
    return DynamicsConfig{steps, seed, std::move(params)};
}

}  // namespace

TEST_CASE("every simulator returns N x L and is seed-deterministic") {
    const Graph g = generate_er(12, 0.3, 4);
    for (const auto& name : dynamics_names()) {
        CAPTURE(name);
        const auto a = simulate(name, g, cfg(50, 9));
        const auto b = simulate(name, g, cfg(50, 9));
        CHECK(a.n_nodes() == 12);
        CHECK(a.n_steps() == 50);
        CHECK(a.values() == b.values());
    }
    CHECK_THROWS_AS(simulate("nosuch", g, cfg(10, 1)), Error);
}

TEST_CASE("ising: beta = 0 flips fair coins") {
    const Graph g = generate_er(100, 0.05, 1);
    const auto ts = simulate_ising_glauber(g, cfg(1000, 3, {{"beta", 0.0}}));
    CHECK(all_in(ts.values(), {-1.0, 1.0}));
    // N*L = 1e5 Bernoulli(1/2) draws: 3 sigma = 3 * sqrt(0.25 / 1e5)
    const double up = ((ts.values().array() + 1.0) / 2.0).mean();
    CHECK(std::abs(up - 0.5) < 3.0 * std::sqrt(0.25 / 1e5));
}

TEST_CASE("ising: strong coupling freezes an ordered state") {
    const Graph g = generate_ring(10, 2);
    const Vector up = Vector::Ones(10);
    const auto ts = simulate_ising_glauber(g, cfg(200, 5, {{"beta", 50.0}, {"coupling", 1.0}}), up);
    CHECK(ts.values() == Matrix::Ones(10, 200));
    CHECK_THROWS_AS(simulate_ising_glauber(g, cfg(10, 1, {{"beta", -1.0}})), Error);
}

TEST_CASE("sis absorbing states and parameter checks") {
    const Graph g = generate_er(30, 0.2, 2);
    const auto cured = simulate_sis(g, cfg(20, 1, {{"beta_inf", 0.0}, {"mu", 1.0}, {"init_frac", 0.5}}));
    CHECK(cured.values().rightCols(19).isZero(0.0));

    const auto none = simulate_sis(g, cfg(20, 1, {{"init_frac", 0.0}}));
    CHECK(none.values().isZero(0.0));

    const auto decay = simulate_sis(g, cfg(100, 4, {{"beta_inf", 0.0}, {"mu", 0.1}, {"init_frac", 0.6}}));
    for (Eigen::Index t = 1; t < 100; ++t)
        CHECK(decay.values().col(t).sum() <= decay.values().col(t - 1).sum());

    const auto spread = simulate_sis(g, cfg(100, 4, {{"beta_inf", 0.3}, {"mu", 0.2}, {"init_frac", 0.2}}));
    CHECK(all_in(spread.values(), {0.0, 1.0}));

    CHECK_THROWS_AS(simulate_sis(g, cfg(10, 1, {{"mu", 1.5}})), Error);
    CHECK_THROWS_AS(simulate_sis(g, cfg(10, 1, {{"beta_inf", -0.1}})), Error);
}

TEST_CASE("voter consensus is absorbing") {
    const Graph g = generate_ba(25, 2, 3);
    const auto fixed = simulate_voter(g, cfg(50, 2), Vector::Ones(25));
    CHECK(fixed.values() == Matrix::Ones(25, 50));

    const Graph small = complete_graph(6);
    const auto ts = simulate_voter(small, cfg(400, 8));
    CHECK(all_in(ts.values(), {-1.0, 1.0}));
    bool reached = false;
    for (Eigen::Index t = 0; t < 400; ++t) {
        const auto col = ts.values().col(t);
        if (reached) {
            CHECK(col == ts.values().col(t - 1));
        } else if (col.maxCoeff() == col.minCoeff()) {
            reached = true;
        }
    }
    CHECK(reached);
}

TEST_CASE("random walker is one-hot and follows edges") {
    const Graph g = generate_ba(20, 2, 6);
    const auto ts = simulate_random_walker(g, cfg(500, 7));
    CHECK(all_in(ts.values(), {0.0, 1.0}));
    std::size_t prev = 0;
    for (Eigen::Index t = 0; t < 500; ++t) {
        CHECK(ts.values().col(t).sum() == 1.0);
        Eigen::Index at = 0;
        ts.values().col(t).maxCoeff(&at);
        if (t > 0) CHECK(g.has_edge(prev, static_cast<std::size_t>(at)));
        prev = static_cast<std::size_t>(at);
    }

    Vector start = Vector::Zero(2);
    start(0) = 1.0;
    const auto k2 = simulate_random_walker(complete_graph(2), cfg(9, 1), start);
    for (Eigen::Index t = 0; t < 9; ++t) CHECK(k2.values()(t % 2, t) == 1.0);

    const auto stuck = simulate_random_walker(Graph(3), cfg(5, 2));
    for (Eigen::Index t = 1; t < 5; ++t) CHECK(stuck.values().col(t) == stuck.values().col(0));
}

TEST_CASE("kuramoto") {
    const Graph g = generate_er(8, 0.4, 1);
    const auto config = cfg(300, 12, {{"coupling", 0.0}, {"dt", 0.05}, {"omega_spread", 2.0}});
    const auto ts = simulate_kuramoto(g, config);
    const Vector omega = kuramoto_frequencies(8, config);
    const double two_pi = 2.0 * std::numbers::pi;
    for (Eigen::Index i = 0; i < 8; ++i)
        for (Eigen::Index t = 0; t < 300; ++t) {
            const double expected = std::fmod(ts.values()(i, 0) + omega(i) * t * 0.05 + 100 * two_pi, two_pi);
            double gap = std::abs(ts.values()(i, t) - expected);
            gap = std::min(gap, two_pi - gap);
            CHECK(gap < 1e-9);
        }
    CHECK(ts.values().minCoeff() >= 0.0);
    CHECK(ts.values().maxCoeff() < two_pi);

    const auto sync = simulate_kuramoto(g, cfg(100, 3, {{"coupling", 1.5}}), Vector::Constant(8, 1.0),
                                        Vector::Constant(8, 0.7));
    for (Eigen::Index i = 1; i < 8; ++i) CHECK(sync.values().row(i) == sync.values().row(0));

    CHECK_THROWS_AS(simulate_kuramoto(g, cfg(10, 1, {{"dt", 0.0}})), Error);
}

TEST_CASE("diffusion") {
    const Graph p5 = path_graph(5);
    const auto flat = simulate_diffusion(p5, cfg(50, 1, {{"noise_sigma", 0.0}}), Vector::Constant(5, 2.5));
    CHECK(flat.values() == Matrix::Constant(5, 50, 2.5));

    const auto ts = simulate_diffusion(p5, cfg(200, 2, {{"noise_sigma", 0.0}}));
    const Matrix& x = ts.values();
    const double mean0 = x.col(0).mean();
    double prev_spread = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < 200; ++t) {
        CHECK(std::abs(x.col(t).mean() - mean0) <= 1e-9);
        const double spread = (x.col(t).array() - x.col(t).mean()).matrix().norm();
        CHECK(spread <= prev_spread);
        prev_spread = spread;
    }

    CHECK_THROWS_AS(simulate_diffusion(p5, cfg(10, 1, {{"eps", 1.0}})), Error);  // lambda_max ~ 3.6
    CHECK_THROWS_AS(simulate_diffusion(p5, cfg(10, 1, {{"noise_sigma", -1.0}})), Error);
}

TEST_CASE("config validation") {
    const Graph g = complete_graph(3);
    CHECK_THROWS_AS(simulate_voter(g, cfg(1, 1)), Error);
    CHECK_THROWS_AS(simulate_sis(g, cfg(10, 1, {{"mu", std::nan("")}})), Error);
    try {
        simulate_voter(g, cfg(10, 1, {{"beta", 1.0}}));
        FAIL("expected unknown parameter");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownName);
    }
    Matrix directed = Matrix::Zero(2, 2);
    directed(0, 1) = 1.0;
    CHECK_THROWS_AS(simulate_voter(Graph(directed, true), cfg(10, 1)), Error);
}
