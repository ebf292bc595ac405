#include "reconet/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "reconet/error.hpp"
#include "reconet/parallel.hpp"

namespace reconet {

namespace {

void check_series(const TimeSeries& ts) {
    if (!ts.values().allFinite()) throw Error(ErrorKind::Input, "time series has non-finite entries");
    if (ts.n_steps() < kMinSteps)
        throw Error(ErrorKind::InsufficientData,
                    "reconstruction needs at least " + std::to_string(kMinSteps) + " timesteps");
}

bool is_constant(const Vector& row) { return row.maxCoeff() == row.minCoeff(); }

std::vector<Vector> rows_of(const Matrix& m) {
    std::vector<Vector> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows[i] = m.row(i).transpose();
    return rows;
}

Matrix population_covariance(const Matrix& x) {
    const Matrix centered = x.colwise() - x.rowwise().mean();
    Matrix s = centered * centered.transpose() / static_cast<double>(x.cols());
    return (s + s.transpose()) * 0.5;
}

// -Theta_ij / sqrt(Theta_ii Theta_jj), zero for degenerate pairs.
Matrix precision_to_partial(const Matrix& theta) {
    const Eigen::Index n = theta.rows();
    Matrix w = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double denom = theta(i, i) * theta(j, j);
            if (denom > 0.0) w(i, j) = -theta(i, j) / std::sqrt(denom);
        }
    return (w + w.transpose()) * 0.5;
}

double soft_threshold(double x, double lambda) {
    if (x > lambda) return x - lambda;
    if (x < -lambda) return x + lambda;
    return 0.0;
}

double log2_safe(double x) { return std::log2(x); }

// Plug-in mutual information (bits) of two symbol streams over `bins` symbols.
double mutual_information_bits(const std::vector<int>& a, const std::vector<int>& b,
                               std::size_t bins) {
    const std::size_t length = a.size();
    std::vector<double> joint(bins * bins, 0.0), pa(bins, 0.0), pb(bins, 0.0);
    for (std::size_t t = 0; t < length; ++t) {
        joint[a[t] * bins + b[t]] += 1.0;
        pa[a[t]] += 1.0;
        pb[b[t]] += 1.0;
    }
    const double total = static_cast<double>(length);
    double mi = 0.0;
    for (std::size_t x = 0; x < bins; ++x)
        for (std::size_t y = 0; y < bins; ++y) {
            const double c = joint[x * bins + y];
            if (c == 0.0) continue;
            mi += (c / total) * log2_safe(c * total / (pa[x] * pb[y]));
        }
    return std::max(0.0, mi);
}

std::vector<int> equal_width_symbols(const Vector& row, std::size_t bins) {
    std::vector<int> symbols(static_cast<std::size_t>(row.size()), 0);
    const double lo = row.minCoeff();
    const double hi = row.maxCoeff();
    if (hi == lo) return symbols;
    const double width = hi - lo;
    for (Eigen::Index t = 0; t < row.size(); ++t) {
        auto bin = static_cast<std::size_t>(std::floor((row(t) - lo) / width * static_cast<double>(bins)));
        symbols[t] = static_cast<int>(std::min(bin, bins - 1));
    }
    return symbols;
}

double median(Vector row) {
    const auto n = static_cast<std::size_t>(row.size());
    std::sort(row.data(), row.data() + n);
    if (n % 2 == 1) return row(n / 2);
    return 0.5 * (row(n / 2 - 1) + row(n / 2));
}

// Residual sum of squares of the least-squares fit, or nullopt if rank-deficient.
std::optional<double> least_squares_rss(const Matrix& design, const Vector& target) {
    Eigen::ColPivHouseholderQR<Matrix> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < design.cols()) return std::nullopt;
    const Vector coef = qr.solve(target);
    return (target - design * coef).squaredNorm();
}

std::string valid_methods_list() {
    std::string out;
    for (const auto& name : reconstruction_names()) out += (out.empty() ? "" : ", ") + name;
    return out;
}

}  // namespace

ReconstructionResult reconstruct_correlation(const TimeSeries& ts, CorrelationMode mode) {
    check_series(ts);
    const std::size_t n = ts.n_nodes();
    std::vector<Vector> centered = rows_of(ts.values());
    std::vector<double> norm2(n, 0.0);
    std::vector<bool> constant(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        constant[i] = is_constant(centered[i]);
        centered[i].array() -= centered[i].mean();
        norm2[i] = centered[i].squaredNorm();
    }

    Matrix w = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (constant[i] || constant[j] || norm2[i] == 0.0 || norm2[j] == 0.0) continue;
            double r = centered[i].dot(centered[j]) / (std::sqrt(norm2[i]) * std::sqrt(norm2[j]));
            r = std::clamp(r, -1.0, 1.0);
            if (mode == CorrelationMode::Absolute) r = std::abs(r);
            w(i, j) = w(j, i) = r;
        }
    return {"correlation", std::move(w), false,
            {{"mode", mode == CorrelationMode::Absolute ? 1.0 : 0.0}}, true};
}

ReconstructionResult reconstruct_partial_correlation(const TimeSeries& ts) {
    check_series(ts);
    const Matrix theta = pseudoinverse(population_covariance(ts.values()));
    return {"partial_correlation", precision_to_partial(theta), false, {}, true};
}

ReconstructionResult reconstruct_graphical_lasso(const TimeSeries& ts,
                                                 const GraphicalLassoOptions& options) {
    check_series(ts);
    if (!(options.alpha >= 0.0)) throw Error(ErrorKind::Parameter, "alpha must be non-negative");
    if (!(options.tol > 0.0)) throw Error(ErrorKind::Parameter, "tol must be positive");
    if (options.max_sweeps < 1) throw Error(ErrorKind::Parameter, "max_sweeps must be positive");

    const Matrix full_cov = population_covariance(ts.values());
    const Eigen::Index n_all = full_cov.rows();

    // Constant rows carry no information and would make W singular.
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < n_all; ++i)
        if (!is_constant(ts.values().row(i).transpose())) active.push_back(i);
    const auto p = static_cast<Eigen::Index>(active.size());

    ParamMap params = {{"alpha", options.alpha},
                       {"tol", options.tol},
                       {"max_sweeps", static_cast<double>(options.max_sweeps)}};
    Matrix weights = Matrix::Zero(n_all, n_all);
    if (p < 2) {
        params["sweeps"] = 0.0;
        params["converged"] = 1.0;
        return {"graphical_lasso", std::move(weights), false, std::move(params), true};
    }

    Matrix s(p, p);
    for (Eigen::Index a = 0; a < p; ++a)
        for (Eigen::Index b = 0; b < p; ++b) s(a, b) = full_cov(active[a], active[b]);

    double off_scale = 0.0;
    for (Eigen::Index a = 0; a < p; ++a)
        for (Eigen::Index b = 0; b < p; ++b)
            if (a != b) off_scale += std::abs(s(a, b));
    off_scale /= static_cast<double>(p * (p - 1));
    const double threshold = options.tol * (off_scale + 1e-12);

    Matrix w = s;
    Matrix beta = Matrix::Zero(p - 1, p);  // column j: lasso coefficients for node j
    bool converged = false;
    std::size_t sweeps = 0;

    Matrix w11(p - 1, p - 1);
    Vector s12(p - 1);
    std::vector<Eigen::Index> others(static_cast<std::size_t>(p - 1));
    while (sweeps < options.max_sweeps && !converged) {
        const Matrix w_before = w;
        for (Eigen::Index j = 0; j < p; ++j) {
            for (Eigen::Index a = 0, k = 0; a < p; ++a)
                if (a != j) others[k++] = a;
            for (Eigen::Index a = 0; a < p - 1; ++a) {
                s12(a) = s(others[a], j);
                for (Eigen::Index b = 0; b < p - 1; ++b) w11(a, b) = w(others[a], others[b]);
            }

            Vector b = beta.col(j);
            for (int iter = 0; iter < 10000; ++iter) {
                double max_delta = 0.0;
                double max_coef = 0.0;
                for (Eigen::Index k = 0; k < p - 1; ++k) {
                    const double partial = s12(k) - w11.row(k).dot(b) + w11(k, k) * b(k);
                    const double updated = soft_threshold(partial, options.alpha) / w11(k, k);
                    max_delta = std::max(max_delta, std::abs(updated - b(k)));
                    b(k) = updated;
                    max_coef = std::max(max_coef, std::abs(updated));
                }
                if (max_delta <= 1e-13 * std::max(1.0, max_coef)) break;
            }
            beta.col(j) = b;

            const Vector w12 = w11 * b;
            for (Eigen::Index a = 0; a < p - 1; ++a) {
                w(others[a], j) = w12(a);
                w(j, others[a]) = w12(a);
            }
        }
        ++sweeps;

        double change = 0.0;
        for (Eigen::Index a = 0; a < p; ++a)
            for (Eigen::Index b = 0; b < p; ++b)
                if (a != b) change += std::abs(w(a, b) - w_before(a, b));
        change /= static_cast<double>(p * (p - 1));
        converged = change < threshold;
    }

    Matrix theta = Matrix::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index a = 0, k = 0; a < p; ++a)
            if (a != j) others[k++] = a;
        double w12_dot_beta = 0.0;
        for (Eigen::Index a = 0; a < p - 1; ++a) w12_dot_beta += w(others[a], j) * beta(a, j);
        const double theta_jj = 1.0 / (w(j, j) - w12_dot_beta);
        theta(j, j) = theta_jj;
        for (Eigen::Index a = 0; a < p - 1; ++a) theta(others[a], j) = -beta(a, j) * theta_jj;
    }
    theta = (theta + theta.transpose()) * 0.5;

    const Matrix partial = precision_to_partial(theta);
    for (Eigen::Index a = 0; a < p; ++a)
        for (Eigen::Index b = 0; b < p; ++b) weights(active[a], active[b]) = partial(a, b);
    if (!weights.allFinite())
        throw Error(ErrorKind::NumericalFailure, "graphical lasso produced non-finite estimates");

    params["sweeps"] = static_cast<double>(sweeps);
    params["converged"] = converged ? 1.0 : 0.0;
    return {"graphical_lasso", std::move(weights), false, std::move(params), converged};
}

ReconstructionResult reconstruct_mutual_information(const TimeSeries& ts, std::size_t bins) {
    check_series(ts);
    if (bins < 2) throw Error(ErrorKind::Parameter, "bins must be at least 2");
    const std::size_t n = ts.n_nodes();
    std::vector<std::vector<int>> symbols(n);
    for (std::size_t i = 0; i < n; ++i)
        symbols[i] = equal_width_symbols(ts.values().row(i).transpose(), bins);

    Matrix w = Matrix::Zero(n, n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double mi = mutual_information_bits(symbols[i], symbols[j], bins);
            w(i, j) = mi;
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) w(j, i) = w(i, j);
    return {"mutual_information", std::move(w), false, {{"bins", static_cast<double>(bins)}}, true};
}

ReconstructionResult reconstruct_granger(const TimeSeries& ts, std::size_t order) {
    check_series(ts);
    if (order < 1) throw Error(ErrorKind::Parameter, "lag order must be at least 1");
    const std::size_t length = ts.n_steps();
    if (length <= 3 * order + 3)
        throw Error(ErrorKind::InsufficientData, "series too short for the requested lag order");
    const std::size_t n = ts.n_nodes();
    const Matrix& x = ts.values();
    const auto rows = static_cast<Eigen::Index>(length - order);
    const auto p = static_cast<Eigen::Index>(order);

    auto target_of = [&](std::size_t j) {
        Vector y(rows);
        for (Eigen::Index r = 0; r < rows; ++r) y(r) = x(j, r + p);
        return y;
    };
    auto fill_lags = [&](Matrix& design, Eigen::Index first_col, std::size_t node) {
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index lag = 1; lag <= p; ++lag)
                design(r, first_col + lag - 1) = x(node, r + p - lag);
    };

    std::vector<std::optional<double>> restricted(n);
    parallel_for(n, [&](std::size_t j) {
        Matrix design(rows, 1 + p);
        design.col(0).setOnes();
        fill_lags(design, 1, j);
        restricted[j] = least_squares_rss(design, target_of(j));
    });

    Matrix w = Matrix::Zero(n, n);
    parallel_for(n * n, [&](std::size_t k) {
        const std::size_t i = k / n;
        const std::size_t j = k % n;
        if (i == j || !restricted[j]) return;
        Matrix design(rows, 1 + 2 * p);
        design.col(0).setOnes();
        fill_lags(design, 1, j);
        fill_lags(design, 1 + p, i);
        const auto full = least_squares_rss(design, target_of(j));
        const double rss_r = *restricted[j];
        if (!full || rss_r <= 0.0) return;
        // A perfect full fit caps the score at ln(1e15) instead of +inf.
        const double rss_f = std::max(*full, rss_r * 1e-15);
        w(i, j) = std::max(0.0, std::log(rss_r / rss_f));
    });
    return {"granger", std::move(w), true, {{"order", static_cast<double>(order)}}, true};
}

ReconstructionResult reconstruct_transfer_entropy(const TimeSeries& ts) {
    check_series(ts);
    const std::size_t n = ts.n_nodes();
    const std::size_t length = ts.n_steps();
    std::vector<std::vector<int>> bits(n, std::vector<int>(length, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const Vector row = ts.values().row(i).transpose();
        const double cut = median(row);
        for (std::size_t t = 0; t < length; ++t) bits[i][t] = row(t) > cut ? 1 : 0;
    }

    Matrix w = Matrix::Zero(n, n);
    const double samples = static_cast<double>(length - 1);
    parallel_for(n * n, [&](std::size_t k) {
        const std::size_t i = k / n;
        const std::size_t j = k % n;
        if (i == j) return;
        // index = next * 4 + current * 2 + source
        double joint[8] = {};
        for (std::size_t t = 0; t + 1 < length; ++t)
            joint[bits[j][t + 1] * 4 + bits[j][t] * 2 + bits[i][t]] += 1.0;
        double te = 0.0;
        for (int next = 0; next < 2; ++next)
            for (int cur = 0; cur < 2; ++cur)
                for (int src = 0; src < 2; ++src) {
                    const double abc = joint[next * 4 + cur * 2 + src];
                    if (abc == 0.0) continue;
                    const double bc = joint[cur * 2 + src] + joint[4 + cur * 2 + src];
                    const double ab = joint[next * 4 + cur * 2] + joint[next * 4 + cur * 2 + 1];
                    const double b = joint[cur * 2] + joint[cur * 2 + 1] + joint[4 + cur * 2] +
                                     joint[4 + cur * 2 + 1];
                    te += (abc / samples) * std::log2((abc * b) / (bc * ab));
                }
        w(i, j) = std::max(0.0, te);
    });
    return {"transfer_entropy", std::move(w), true, {}, true};
}

ReconstructionResult reconstruct_mean_field_ising(const TimeSeries& ts, IsingVariant variant) {
    check_series(ts);
    const Matrix& s = ts.values();
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index t = 0; t < s.cols(); ++t)
            if (s(i, t) != 1.0 && s(i, t) != -1.0)
                throw Error(ErrorKind::Input, "mean-field Ising inversion needs +-1 spins");

    const Eigen::Index n = s.rows();
    const Vector m = s.rowwise().mean();
    Matrix c = s * s.transpose() / static_cast<double>(s.cols()) - m * m.transpose();
    c = (c + c.transpose()) * 0.5;
    const Matrix inv = pseudoinverse(c);

    Matrix j_est = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) {
            if (i == k) continue;
            const double naive = -inv(i, k);
            j_est(i, k) = naive;
            if (variant != IsingVariant::Tap) continue;
            const double mm = m(i) * m(k);
            const double disc = 1.0 - 8.0 * mm * inv(i, k);
            if (std::abs(mm) < 1e-8 || disc < 0.0) continue;
            j_est(i, k) = (-1.0 + std::sqrt(disc)) / (4.0 * mm);
        }
    Matrix w = (j_est + j_est.transpose()) * 0.5;
    w.diagonal().setZero();
    return {"mean_field_ising", std::move(w), false,
            {{"variant", variant == IsingVariant::Tap ? 1.0 : 0.0}}, true};
}

const std::vector<std::string>& reconstruction_names() {
    static const std::vector<std::string> names = {
        "correlation", "partial_correlation", "graphical_lasso", "mutual_information",
        "granger",     "transfer_entropy",    "mean_field_ising"};
    return names;
}

ReconstructionResult reconstruct(std::string_view method, const TimeSeries& ts,
                                 const ParamMap& params) {
    auto allow = [&](std::initializer_list<const char*> known) {
        for (const auto& [key, value] : params) {
            if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
                throw Error(ErrorKind::UnknownName, "unknown parameter '" + key + "' for method '" +
                                                        std::string(method) + "'");
        }
    };
    auto get = [&](const char* key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto get_count = [&](const char* key, double fallback) {
        const double v = get(key, fallback);
        if (!(v >= 0.0) || v != std::floor(v))
            throw Error(ErrorKind::Parameter, std::string(key) + " must be a non-negative integer");
        return static_cast<std::size_t>(v);
    };

    if (method == "correlation") {
        allow({"mode"});
        return reconstruct_correlation(ts, get("mode", 1.0) == 0.0 ? CorrelationMode::Signed
                                                                   : CorrelationMode::Absolute);
    }
    if (method == "partial_correlation") {
        allow({});
        return reconstruct_partial_correlation(ts);
    }
    if (method == "graphical_lasso") {
        allow({"alpha", "tol", "max_sweeps"});
        GraphicalLassoOptions opts;
        opts.alpha = get("alpha", opts.alpha);
        opts.tol = get("tol", opts.tol);
        opts.max_sweeps = get_count("max_sweeps", static_cast<double>(opts.max_sweeps));
        return reconstruct_graphical_lasso(ts, opts);
    }
    if (method == "mutual_information") {
        allow({"bins"});
        return reconstruct_mutual_information(ts, get_count("bins", 8.0));
    }
    if (method == "granger") {
        allow({"order"});
        return reconstruct_granger(ts, get_count("order", 1.0));
    }
    if (method == "transfer_entropy") {
        allow({});
        return reconstruct_transfer_entropy(ts);
    }
    if (method == "mean_field_ising") {
        allow({"variant"});
        return reconstruct_mean_field_ising(
            ts, get("variant", 1.0) == 0.0 ? IsingVariant::NaiveMeanField : IsingVariant::Tap);
    }
    throw Error(ErrorKind::UnknownName,
                "unknown method '" + std::string(method) + "'; valid: " + valid_methods_list());
}

std::size_t quantile_keep_count(double q, std::size_t candidates) {
    if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::Parameter, "quantile must lie in [0, 1]");
    // The 1e-9 slack keeps q = k/P from rounding up to k + 1.
    const double raw = std::ceil(q * static_cast<double>(candidates) - 1e-9);
    return std::min(candidates, static_cast<std::size_t>(std::max(0.0, raw)));
}

namespace {

Graph keep_top(const ReconstructionResult& r, std::size_t keep) {
    const auto n = static_cast<std::size_t>(r.weights.rows());
    struct Pair {
        double score;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = r.directed ? 0 : i + 1; j < n; ++j)
            if (i != j) pairs.push_back({std::abs(r.weights(i, j)), i, j});
    // Candidates are generated in lexicographic order, so a stable sort keeps
    // earlier pairs first within each tie group.
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& a, const Pair& b) { return a.score > b.score; });

    Matrix w = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < keep && k < pairs.size(); ++k) {
        w(pairs[k].i, pairs[k].j) = 1.0;
        if (!r.directed) w(pairs[k].j, pairs[k].i) = 1.0;
    }
    return Graph(std::move(w), r.directed);
}

std::size_t candidate_pairs(const ReconstructionResult& r) {
    const auto n = static_cast<std::size_t>(r.weights.rows());
    return r.directed ? n * (n - 1) : n * (n - 1) / 2;
}

}  // namespace

Graph threshold_quantile(const ReconstructionResult& r, double q) {
    return keep_top(r, quantile_keep_count(q, candidate_pairs(r)));
}

Graph threshold_absolute(const ReconstructionResult& r, double tau) {
    if (!(tau >= 0.0)) throw Error(ErrorKind::Parameter, "threshold must be non-negative");
    const Eigen::Index n = r.weights.rows();
    Matrix w = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && std::abs(r.weights(i, j)) > tau) w(i, j) = 1.0;
    if (!r.directed) w = w.cwiseMax(w.transpose());
    return Graph(std::move(w), r.directed);
}

Graph threshold_target_degree(const ReconstructionResult& r, double k_avg) {
    if (!(k_avg > 0.0)) throw Error(ErrorKind::Parameter, "target degree must be positive");
    const auto n = static_cast<double>(r.weights.rows());
    const std::size_t candidates = candidate_pairs(r);
    if (candidates == 0) return keep_top(r, 0);
    const double wanted = r.directed ? k_avg * n : k_avg * n / 2.0;
    const double q = std::min(1.0, wanted / static_cast<double>(candidates));
    return threshold_quantile(r, q);
}

ReconstructionResult symmetrize_max(const ReconstructionResult& r) {
    if (!r.directed) return r;
    ReconstructionResult out = r;
    const Matrix a = r.weights.cwiseAbs();
    out.weights = a.cwiseMax(a.transpose());
    out.directed = false;
    return out;
}

}  // namespace reconet
