#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "oracles.hpp"
#include "reconet/distances.hpp"
#include "reconet/error.hpp"

using namespace reconet;

namespace {

Graph relabel(const Graph& g, std::uint64_t seed) {
    std::vector<std::size_t> perm(g.n());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix w = Matrix::Zero(g.n(), g.n());
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) w(perm[i], perm[j]) = g.weights()(i, j);
    return Graph(w, g.directed());
}

Graph connected_er(std::size_t n, double p, std::uint64_t seed) {
    for (std::uint64_t s = seed;; s += 1000) {
        Graph g = generate_er(n, p, s);
        if (is_connected(g)) return g;
    }
}

// IM(empty_10, K10) at gamma = 0.08, integrated to 30-digit precision by an
// independent adaptive quadrature over the same truncated domain.
constexpr double kImEmptyCompleteTen = 2.4463933693957411;

}  // namespace

TEST_CASE("hand values") {
    const Graph k3 = complete_graph(3), p3 = path_graph(3), e3(3);
    CHECK(std::abs(dist_hamming(k3, p3).value - 1.0 / 3.0) <= 1e-9);
    CHECK(std::abs(dist_jaccard(k3, p3).value - 1.0 / 3.0) <= 1e-9);
    CHECK(std::abs(dist_frobenius(k3, p3).value - std::sqrt(2.0)) <= 1e-9);
    CHECK(std::abs(dist_resistance_perturbation(p3, k3).value - 4.0) <= 1e-9);
    CHECK(std::abs(dist_laplacian_spectrum(e3, k3).value - std::sqrt(18.0)) <= 1e-9);
    CHECK(std::abs(dist_him(Graph(10), complete_graph(10)).value - 1.0) <= 1e-3);

    CHECK(dist_jaccard(Graph(4), Graph(4)).value == 0.0);
    CHECK(dist_hamming(Graph(1), Graph(1)).value == 0.0);
    CHECK(std::abs(dist_degree_jsd(complete_graph(2), Graph(2)).value - 1.0) <= 1e-12);

    DistanceConfig l2;
    l2.p = 2;
    // Resistances: P3 has (1, 1, 2), K3 has 2/3 everywhere.
    const double expected = std::sqrt(2.0 * (2 * std::pow(1.0 / 3.0, 2) + std::pow(4.0 / 3.0, 2)));
    CHECK(std::abs(dist_resistance_perturbation(p3, k3, l2).value - expected) <= 1e-9);
}

TEST_CASE("Ipsen-Mikhailov regression value") {
    const double im = dist_ipsen_mikhailov(Graph(10), complete_graph(10)).value;
    CHECK(std::abs(im - kImEmptyCompleteTen) <= 1e-3 * kImEmptyCompleteTen);
    CHECK(him_normalizer(10, {}) == im);
}

TEST_CASE("Ipsen-Mikhailov density integrates to one on the truncated domain") {
    std::vector<Graph> ensemble = {Graph(2), Graph(10), complete_graph(10), complete_graph(24),
                                   path_graph(12), generate_ring(20, 4)};
    for (std::uint64_t s = 0; s < 20; ++s) ensemble.push_back(generate_er(8 + s, 0.1 + 0.04 * s, s));
    for (std::uint64_t s = 0; s < 5; ++s) ensemble.push_back(generate_ba(15 + 3 * s, 1 + s, s));

    const DistanceConfig cfg;
    for (const Graph& g : ensemble) {
        const Vector omega = im_frequencies(g);
        const double upper = im_integration_limit(omega.maxCoeff(), cfg.gamma);
        const double mass = simpson(im_spectral_density(g, cfg.gamma, upper, cfg.grid_points), upper);
        CHECK(mass >= 0.999);
        CHECK(mass <= 1.0 + 1e-9);

        // Closed-form antiderivative of each Lorentzian.
        double norm = 0.0, inside = 0.0;
        for (double w : omega) {
            norm += 0.5 * std::numbers::pi + std::atan(w / cfg.gamma);
            inside += std::atan((upper - w) / cfg.gamma) + std::atan(w / cfg.gamma);
        }
        CHECK(std::abs(mass - inside / norm) <= 1e-6);
    }
}

TEST_CASE("HIM of empty versus complete is one") {
    for (std::size_t n : {5, 10, 20}) {
        CAPTURE(n);
        CHECK(std::abs(dist_him(Graph(n), complete_graph(n)).value - 1.0) <= 1e-3);
    }
    DistanceConfig half;
    half.xi = 0.5;
    CHECK(std::abs(dist_him(Graph(6), complete_graph(6), half).value - 1.0) <= 1e-3);
    DistanceConfig none;
    none.xi = 0.0;
    CHECK(std::abs(dist_him(path_graph(5), complete_graph(5), none).value -
                   dist_hamming(path_graph(5), complete_graph(5)).value) <= 1e-12);
}

TEST_CASE("DeltaCon matches explicit inversion") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(2, 6);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = size(rng);
        const Graph a = generate_er(n, density(rng), rng());
        const Graph b = generate_er(n, density(rng), rng());
        CAPTURE(k);
        CHECK(std::abs(dist_deltacon(a, b).value - oracle::deltacon(a, b)) <= 1e-8);
    }
    CHECK(dist_deltacon(complete_graph(5), complete_graph(5)).value == 0.0);
}

TEST_CASE("NetSimile matches brute-force signature") {
    const Graph k3 = complete_graph(3), p3 = path_graph(3);
    const auto sig = netsimile_signature(k3);
    const auto ref = oracle::netsimile_signature(k3);
    REQUIRE(sig.size() == 35);
    for (std::size_t k = 0; k < 35; ++k) CHECK(std::abs(sig[k] - ref[k]) <= 1e-12);

    const double expected = oracle::canberra(oracle::netsimile_signature(k3), oracle::netsimile_signature(p3));
    CHECK(std::abs(dist_netsimile(k3, p3).value - expected) <= 1e-8);

    for (std::uint64_t s = 0; s < 10; ++s) {
        const Graph a = generate_er(12, 0.3, s), b = generate_ba(12, 2, s);
        CHECK(std::abs(dist_netsimile(a, b).value -
                       oracle::canberra(oracle::netsimile_signature(a), oracle::netsimile_signature(b))) <= 1e-8);
    }
}

TEST_CASE("identity, symmetry and non-negativity") {
    for (std::uint64_t s = 0; s < 15; ++s) {
        const std::size_t n = 8 + s;
        const Graph a = connected_er(n, 0.35, s), b = connected_er(n, 0.35, s + 500);
        for (const auto& name : distance_names()) {
            CAPTURE(name);
            CAPTURE(s);
            const double ab = distance(name, a, b).value;
            const double ba = distance(name, b, a).value;
            CHECK(distance(name, a, a).value <= 1e-9);
            CHECK(std::abs(ab - ba) <= 1e-9);
            CHECK(ab >= 0.0);
            if (name == "hamming" || name == "jaccard" || name == "degree_jsd") CHECK(ab <= 1.0);
        }
    }
}

TEST_CASE("label-free measures are isomorphism invariant") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Graph a = generate_er(14, 0.3, s), b = generate_ba(14, 2, s);
        for (std::string name : {"degree_jsd", "laplacian_spectrum", "ipsen_mikhailov", "netsimile"}) {
            CAPTURE(name);
            const double base = distance(name, a, b).value;
            CHECK(std::abs(distance(name, relabel(a, s + 1), b).value - base) < 1e-8);
            CHECK(std::abs(distance(name, a, relabel(b, s + 2)).value - base) < 1e-8);
        }
    }
}

TEST_CASE("error paths") {
    const Graph a = complete_graph(4), b = complete_graph(5);
    for (const char* name : {"hamming", "jaccard", "frobenius", "him", "deltacon", "resistance_perturbation"}) {
        try {
            distance(name, a, b);
            FAIL("expected size mismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::SizeMismatch);
        }
    }
    CHECK_NOTHROW(distance("netsimile", a, b));
    CHECK_NOTHROW(distance("ipsen_mikhailov", a, b));
    CHECK_NOTHROW(distance("laplacian_spectrum", a, b));

    try {
        distance("nosuch", a, a);
        FAIL("expected unknown name");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownName);
    }

    DistanceConfig bad;
    bad.p = 3;
    CHECK_THROWS_AS(dist_resistance_perturbation(a, a, bad), Error);
    bad = {};
    bad.gamma = 0.0;
    CHECK_THROWS_AS(dist_ipsen_mikhailov(a, a, bad), Error);

    Matrix d = Matrix::Zero(3, 3);
    d(0, 1) = 1.0;
    try {
        dist_hamming(Graph(d, true), Graph(d, true));
        FAIL("expected unsupported input");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedInput);
    }
}

TEST_CASE("distance_all embeds per-measure failures") {
    const Graph connected = path_graph(6);
    Graph split = Graph::from_edges(6, {{0, 1}, {2, 3}}, false);
    const auto entries = distance_all(connected, split);
    REQUIRE(entries.size() == distance_names().size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        CHECK(entries[k].measure == distance_names()[k]);
        if (entries[k].measure == "resistance_perturbation") {
            CHECK(entries[k].status == "precondition_failed");
            CHECK_FALSE(entries[k].value.has_value());
        } else {
            CHECK(entries[k].status == "ok");
            CHECK(entries[k].value.has_value());
        }
    }

    const auto mismatch = distance_all(complete_graph(3), complete_graph(4));
    std::size_t failed = 0;
    for (const auto& e : mismatch)
        if (e.status == "size_mismatch") ++failed;
    CHECK(failed == 6);
}

TEST_CASE("him normalizer is safe under concurrent first use") {
    DistanceConfig cfg;
    cfg.gamma = 0.0731;
    std::vector<double> seen(8);
    {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < seen.size(); ++t)
            threads.emplace_back([&, t] { seen[t] = him_normalizer(7, cfg); });
    }
    for (double v : seen) CHECK(v == seen.front());
}
