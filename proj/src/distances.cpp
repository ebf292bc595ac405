#include "reconet/distances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "reconet/error.hpp"

namespace reconet {

namespace {

// Tail mass of any single Lorentzian left outside [0, Omega] is at most this
// fraction of its normalisation.
constexpr double kImTailFraction = 5e-4;

void require_undirected(const Graph& g1, const Graph& g2) {
    if (g1.directed() || g2.directed())
        throw Error(ErrorKind::UnsupportedInput, "graph distances are defined for undirected graphs");
}

void require_same_n(const Graph& g1, const Graph& g2) {
    require_undirected(g1, g2);
    if (g1.n() != g2.n())
        throw Error(ErrorKind::SizeMismatch, "measure requires graphs with equal node counts (" +
                                                 std::to_string(g1.n()) + " vs " +
                                                 std::to_string(g2.n()) + ")");
}

std::size_t even_intervals(std::size_t grid_points) { return grid_points + grid_points % 2; }

double kl_term(double p, double m) { return p > 0.0 ? p * std::log2(p / m) : 0.0; }

struct Moments {
    double mean, median, stddev, skewness, kurtosis;
};

// Population moments of an already sorted sample. Ratios whose denominator
// vanishes count as 0, so a constant feature has skewness 0 and kurtosis -3.
Moments aggregate_sorted(const std::vector<double>& x) {
    const std::size_t n = x.size();
    const double count = static_cast<double>(n);
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / count;
    const double median = n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= count;
    m3 /= count;
    m4 /= count;
    const double scale = std::max(1.0, std::max(std::abs(x.front()), std::abs(x.back())));
    const bool flat = x.front() == x.back() || std::sqrt(m2) <= 1e-12 * scale;
    const double skew = flat ? 0.0 : m3 / std::pow(m2, 1.5);
    const double kurt = (flat ? 0.0 : m4 / (m2 * m2)) - 3.0;
    return {mean, median, std::sqrt(m2), skew, kurt};
}

double sorted_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

}  // namespace

void DistanceConfig::validate() const {
    if (!(gamma > 0.0)) throw Error(ErrorKind::Parameter, "gamma must be positive");
    if (!(xi >= 0.0)) throw Error(ErrorKind::Parameter, "xi must be non-negative");
    if (p != 1 && p != 2) throw Error(ErrorKind::Parameter, "p must be 1 or 2");
    if (grid_points < (1u << 10)) throw Error(ErrorKind::Parameter, "grid_points must be >= 1024");
}

DistanceValue dist_hamming(const Graph& g1, const Graph& g2) {
    require_same_n(g1, g2);
    const std::size_t n = g1.n();
    if (n < 2) return {"hamming", 0.0};
    const double diff = (g1.binary_adjacency() - g2.binary_adjacency()).cwiseAbs().sum();
    return {"hamming", diff / static_cast<double>(n * (n - 1))};
}

DistanceValue dist_jaccard(const Graph& g1, const Graph& g2) {
    require_same_n(g1, g2);
    std::size_t both = 0, either = 0;
    for (std::size_t i = 0; i < g1.n(); ++i)
        for (std::size_t j = i + 1; j < g1.n(); ++j) {
            const bool a = g1.has_edge(i, j);
            const bool b = g2.has_edge(i, j);
            both += a && b;
            either += a || b;
        }
    if (either == 0) return {"jaccard", 0.0};
    return {"jaccard", 1.0 - static_cast<double>(both) / static_cast<double>(either)};
}

DistanceValue dist_frobenius(const Graph& g1, const Graph& g2) {
    require_same_n(g1, g2);
    return {"frobenius", (g1.weights() - g2.weights()).norm()};
}

DistanceValue dist_degree_jsd(const Graph& g1, const Graph& g2) {
    require_undirected(g1, g2);
    const Vector d1 = degrees(g1);
    const Vector d2 = degrees(g2);
    const auto k_max = static_cast<std::size_t>(std::max(d1.maxCoeff(), d2.maxCoeff()));
    std::vector<double> p(k_max + 1, 0.0), q(k_max + 1, 0.0);
    for (double d : d1) p[static_cast<std::size_t>(d)] += 1.0;
    for (double d : d2) q[static_cast<std::size_t>(d)] += 1.0;
    for (double& v : p) v /= static_cast<double>(g1.n());
    for (double& v : q) v /= static_cast<double>(g2.n());

    double kl_p = 0.0, kl_q = 0.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
        const double m = 0.5 * (p[k] + q[k]);
        kl_p += kl_term(p[k], m);
        kl_q += kl_term(q[k], m);
    }
    const double jsd = 0.5 * kl_p + 0.5 * kl_q;
    return {"degree_jsd", std::clamp(jsd, 0.0, 1.0)};
}

DistanceValue dist_laplacian_spectrum(const Graph& g1, const Graph& g2) {
    require_undirected(g1, g2);
    Vector s1 = symmetric_eigen(laplacian(g1)).eigenvalues.reverse();
    Vector s2 = symmetric_eigen(laplacian(g2)).eigenvalues.reverse();
    const Eigen::Index len = std::max(s1.size(), s2.size());
    Vector a = Vector::Zero(len), b = Vector::Zero(len);
    a.head(s1.size()) = s1;
    b.head(s2.size()) = s2;
    return {"laplacian_spectrum", (a - b).norm()};
}

Vector im_frequencies(const Graph& g) {
    const Vector eig = symmetric_eigen(laplacian(g)).eigenvalues;
    const Eigen::Index m = eig.size() - 1;
    // Round-off around repeated zero eigenvalues would otherwise be magnified by sqrt.
    const double floor = 1e-10 * std::max(1.0, eig.cwiseAbs().maxCoeff());
    Vector omega(m);
    for (Eigen::Index k = 0; k < m; ++k) omega(k) = eig(k + 1) <= floor ? 0.0 : std::sqrt(eig(k + 1));
    return omega;
}

double im_integration_limit(double omega_top, double gamma) {
    const double margin = gamma / std::tan(0.5 * std::numbers::pi * kImTailFraction);
    return omega_top + std::max(3.0, margin);
}

std::vector<double> im_spectral_density(const Graph& g, double gamma, double omega_max,
                                        std::size_t intervals) {
    const Vector omega = im_frequencies(g);
    double norm = 0.0;
    for (double w : omega) norm += 0.5 * std::numbers::pi + std::atan(w / gamma);
    const double k = 1.0 / norm;
    const double h = omega_max / static_cast<double>(intervals);
    std::vector<double> rho(intervals + 1, 0.0);
    for (std::size_t s = 0; s <= intervals; ++s) {
        const double x = h * static_cast<double>(s);
        double sum = 0.0;
        for (double w : omega) sum += gamma / ((x - w) * (x - w) + gamma * gamma);
        rho[s] = k * sum;
    }
    return rho;
}

double simpson(const std::vector<double>& samples, double upper) {
    const std::size_t intervals = samples.size() - 1;
    if (intervals < 2 || intervals % 2 != 0)
        throw Error(ErrorKind::Parameter, "Simpson rule needs an even number of intervals");
    const double h = upper / static_cast<double>(intervals);
    double acc = samples.front() + samples.back();
    for (std::size_t s = 1; s < intervals; ++s) acc += (s % 2 == 1 ? 4.0 : 2.0) * samples[s];
    return acc * h / 3.0;
}

DistanceValue dist_ipsen_mikhailov(const Graph& g1, const Graph& g2, const DistanceConfig& cfg) {
    require_undirected(g1, g2);
    cfg.validate();
    if (g1.n() < 2 || g2.n() < 2)
        throw Error(ErrorKind::UnsupportedInput, "Ipsen-Mikhailov needs at least two nodes");
    const double top = std::max(im_frequencies(g1).maxCoeff(), im_frequencies(g2).maxCoeff());
    const double upper = im_integration_limit(top, cfg.gamma);
    const std::size_t intervals = even_intervals(cfg.grid_points);
    const auto rho1 = im_spectral_density(g1, cfg.gamma, upper, intervals);
    const auto rho2 = im_spectral_density(g2, cfg.gamma, upper, intervals);
    std::vector<double> sq(rho1.size());
    for (std::size_t s = 0; s < sq.size(); ++s) sq[s] = (rho1[s] - rho2[s]) * (rho1[s] - rho2[s]);
    return {"ipsen_mikhailov", std::sqrt(std::max(0.0, simpson(sq, upper)))};
}

double him_normalizer(std::size_t n, const DistanceConfig& cfg) {
    using Key = std::tuple<std::size_t, double, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{n, cfg.gamma, cfg.grid_points};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    // Computed outside the lock; concurrent callers produce the same value
    // and the first insertion wins.
    const double value = dist_ipsen_mikhailov(Graph(n), complete_graph(n), cfg).value;
    std::lock_guard lock(mutex);
    return cache.emplace(key, value).first->second;
}

DistanceValue dist_him(const Graph& g1, const Graph& g2, const DistanceConfig& cfg) {
    require_same_n(g1, g2);
    cfg.validate();
    const double h = dist_hamming(g1, g2).value;
    const double im = dist_ipsen_mikhailov(g1, g2, cfg).value;
    const double im_norm = im / him_normalizer(g1.n(), cfg);
    return {"him", std::sqrt(h * h + cfg.xi * im_norm * im_norm) / std::sqrt(1.0 + cfg.xi)};
}

Matrix deltacon_affinity(const Graph& g, double eps) {
    const Matrix a = g.binary_adjacency();
    const Eigen::Index n = a.rows();
    Matrix m = -eps * a;
    m.diagonal().array() += 1.0;
    m.diagonal() += eps * eps * a.rowwise().sum();
    Matrix s = m.partialPivLu().inverse();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double& v = s(i, j);
            if (!std::isfinite(v) || v < -1e-12)
                throw Error(ErrorKind::NumericalFailure, "DeltaCon affinity has a negative entry");
            if (v < 0.0) v = 0.0;
        }
    return s;
}

DistanceValue dist_deltacon(const Graph& g1, const Graph& g2) {
    require_same_n(g1, g2);
    const double d_max = std::max(degrees(g1).maxCoeff(), degrees(g2).maxCoeff());
    const double eps = 1.0 / (1.0 + d_max);
    const Matrix s1 = deltacon_affinity(g1, eps).cwiseSqrt();
    const Matrix s2 = deltacon_affinity(g2, eps).cwiseSqrt();
    return {"deltacon", (s1 - s2).norm()};
}

Matrix effective_resistance(const Graph& g) {
    const Matrix pinv = pseudoinverse(laplacian(g));
    const Eigen::Index n = pinv.rows();
    Matrix r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            r(i, j) = i == j ? 0.0 : pinv(i, i) + pinv(j, j) - 2.0 * pinv(i, j);
    return r;
}

DistanceValue dist_resistance_perturbation(const Graph& g1, const Graph& g2,
                                           const DistanceConfig& cfg) {
    require_same_n(g1, g2);
    cfg.validate();
    if (!is_connected(g1) || !is_connected(g2))
        throw Error(ErrorKind::Precondition, "resistance perturbation requires connected graphs");
    const Matrix diff = (effective_resistance(g1) - effective_resistance(g2)).cwiseAbs();
    double value = 0.0;
    if (cfg.p == 1) {
        value = diff.sum();
    } else {
        value = diff.norm();
    }
    return {"resistance_perturbation", value};
}

std::vector<double> netsimile_signature(const Graph& g) {
    const std::size_t n = g.n();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) adj[i] = g.neighbors(i);

    std::vector<double> degree(n), clustering(n), triangles(n);
    for (std::size_t i = 0; i < n; ++i) {
        degree[i] = static_cast<double>(adj[i].size());
        std::size_t t = 0;
        for (std::size_t a = 0; a < adj[i].size(); ++a)
            for (std::size_t b = a + 1; b < adj[i].size(); ++b)
                if (g.has_edge(adj[i][a], adj[i][b])) ++t;
        triangles[i] = static_cast<double>(t);
        const double d = degree[i];
        clustering[i] = d < 2.0 ? 0.0 : 2.0 * triangles[i] / (d * (d - 1.0));
    }

    std::vector<std::vector<double>> features(7, std::vector<double>(n, 0.0));
    std::vector<bool> in_ego(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        features[0][i] = degree[i];
        features[1][i] = clustering[i];
        if (!adj[i].empty()) {
            std::vector<double> nd, nc;
            for (std::size_t j : adj[i]) {
                nd.push_back(degree[j]);
                nc.push_back(clustering[j]);
            }
            features[2][i] = sorted_sum(nd) / degree[i];
            features[3][i] = sorted_sum(nc) / degree[i];
        }

        // Ego net: node plus neighbours, induced.
        const double internal = degree[i] + triangles[i];
        double degree_sum = degree[i];
        in_ego[i] = true;
        for (std::size_t j : adj[i]) {
            in_ego[j] = true;
            degree_sum += degree[j];
        }
        features[4][i] = internal;
        features[5][i] = degree_sum - 2.0 * internal;

        std::vector<bool> outside(n, false);
        std::size_t distinct = 0;
        auto scan = [&](std::size_t u) {
            for (std::size_t v : adj[u])
                if (!in_ego[v] && !outside[v]) {
                    outside[v] = true;
                    ++distinct;
                }
        };
        scan(i);
        for (std::size_t j : adj[i]) scan(j);
        features[6][i] = static_cast<double>(distinct);

        in_ego[i] = false;
        for (std::size_t j : adj[i]) in_ego[j] = false;
    }

    std::vector<double> signature;
    signature.reserve(35);
    for (auto& column : features) {
        std::sort(column.begin(), column.end());
        const Moments m = aggregate_sorted(column);
        signature.insert(signature.end(), {m.mean, m.median, m.stddev, m.skewness, m.kurtosis});
    }
    return signature;
}

DistanceValue dist_netsimile(const Graph& g1, const Graph& g2) {
    require_undirected(g1, g2);
    const auto x = netsimile_signature(g1);
    const auto y = netsimile_signature(g2);
    double value = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double denom = std::abs(x[k]) + std::abs(y[k]);
        if (denom > 0.0) value += std::abs(x[k] - y[k]) / denom;
    }
    return {"netsimile", value};
}

const std::vector<std::string>& distance_names() {
    static const std::vector<std::string> names = {
        "hamming",  "jaccard", "frobenius",  "degree_jsd",
        "laplacian_spectrum", "ipsen_mikhailov", "him", "deltacon",
        "resistance_perturbation", "netsimile"};
    return names;
}

DistanceValue distance(std::string_view measure, const Graph& g1, const Graph& g2,
                       const DistanceConfig& cfg) {
    if (measure == "hamming") return dist_hamming(g1, g2);
    if (measure == "jaccard") return dist_jaccard(g1, g2);
    if (measure == "frobenius") return dist_frobenius(g1, g2);
    if (measure == "degree_jsd") return dist_degree_jsd(g1, g2);
    if (measure == "laplacian_spectrum") return dist_laplacian_spectrum(g1, g2);
    if (measure == "ipsen_mikhailov") return dist_ipsen_mikhailov(g1, g2, cfg);
    if (measure == "him") return dist_him(g1, g2, cfg);
    if (measure == "deltacon") return dist_deltacon(g1, g2);
    if (measure == "resistance_perturbation") return dist_resistance_perturbation(g1, g2, cfg);
    if (measure == "netsimile") return dist_netsimile(g1, g2);
    std::string valid;
    for (const auto& name : distance_names()) valid += (valid.empty() ? "" : ", ") + name;
    throw Error(ErrorKind::UnknownName,
                "unknown measure '" + std::string(measure) + "'; valid: " + valid);
}

std::vector<DistanceEntry> distance_all(const Graph& g1, const Graph& g2,
                                        const DistanceConfig& cfg) {
    std::vector<DistanceEntry> out;
    for (const auto& name : distance_names()) {
        try {
            out.push_back({name, "ok", distance(name, g1, g2, cfg).value, ""});
        } catch (const Error& e) {
            out.push_back({name, std::string(to_string(e.kind())), std::nullopt, e.what()});
        }
    }
    return out;
}

}  // namespace reconet
