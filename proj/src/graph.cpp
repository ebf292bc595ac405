#include "reconet/graph.hpp"

#include <cmath>
#include <queue>
#include <string>

#include <Eigen/Eigenvalues>

#include "reconet/error.hpp"
#include "reconet/rng.hpp"

namespace reconet {

Graph::Graph(std::size_t n, bool directed)
    : weights_(Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))),
      directed_(directed) {
    if (n == 0) throw Error(ErrorKind::Parameter, "graph must have at least one node");
}

Graph::Graph(Matrix weights, bool directed) : weights_(std::move(weights)), directed_(directed) {
    if (weights_.rows() == 0 || weights_.rows() != weights_.cols())
        throw Error(ErrorKind::Input, "weight matrix must be square and non-empty");
    const Eigen::Index n = weights_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (weights_(i, i) != 0.0)
            throw Error(ErrorKind::Input, "self-loop at node " + std::to_string(i));
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!std::isfinite(weights_(i, j)))
                throw Error(ErrorKind::Input, "non-finite weight");
            if (!directed_ && weights_(i, j) != weights_(j, i))
                throw Error(ErrorKind::Input, "undirected graph requires a symmetric matrix");
        }
    }
}

Graph Graph::from_edges(std::size_t n,
                        const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                        bool directed) {
    Graph g(n, directed);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw Error(ErrorKind::Parameter, "edge endpoint out of range");
        if (u == v) throw Error(ErrorKind::Input, "self-loop");
        g.weights_(u, v) = 1.0;
        if (!directed) g.weights_(v, u) = 1.0;
    }
    return g;
}

std::size_t Graph::edge_count() const {
    std::size_t count = 0;
    const Eigen::Index n = weights_.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = directed_ ? 0 : i + 1; j < n; ++j)
            if (weights_(i, j) != 0.0) ++count;
    return count;
}

Matrix Graph::binary_adjacency() const {
    return weights_.unaryExpr([](double w) { return w != 0.0 ? 1.0 : 0.0; });
}

std::vector<std::size_t> Graph::neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n(); ++j)
        if (weights_(i, j) != 0.0) out.push_back(j);
    return out;
}

Graph complete_graph(std::size_t n) {
    Matrix w = Matrix::Ones(n, n);
    w.diagonal().setZero();
    return Graph(std::move(w), false);
}

Graph path_graph(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(n, edges);
}

Graph generate_er(std::size_t n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorKind::Parameter, "edge probability must lie in [0, 1]");
    Graph g(n);
    Matrix w = Matrix::Zero(n, n);
    Rng rng = make_stream(seed, stream::kErdosRenyi);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (unif(rng) < p) w(i, j) = w(j, i) = 1.0;
    return Graph(std::move(w), false);
}

Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m < 1 || m >= n)
        throw Error(ErrorKind::Parameter, "preferential attachment requires 1 <= m < n");
    Matrix w = Matrix::Zero(n, n);
    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            w(i, j) = w(j, i) = 1.0;
            degree[i] += 1.0;
            degree[j] += 1.0;
        }

    Rng rng = make_stream(seed, stream::kBarabasiAlbert);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> weight;
    std::vector<std::size_t> targets;
    for (std::size_t v = m; v < n; ++v) {
        // Degrees are frozen for the round; chosen targets drop out of the urn.
        weight.assign(degree.begin(), degree.begin() + static_cast<std::ptrdiff_t>(v));
        std::vector<bool> taken(v, false);
        targets.clear();
        while (targets.size() < m) {
            double total = 0.0;
            for (std::size_t u = 0; u < v; ++u)
                if (!taken[u]) total += weight[u];
            const bool uniform = total <= 0.0;
            if (uniform) total = static_cast<double>(v - targets.size());
            double r = unif(rng) * total;
            std::size_t pick = v;
            for (std::size_t u = 0; u < v; ++u) {
                if (taken[u]) continue;
                pick = u;
                r -= uniform ? 1.0 : weight[u];
                if (r < 0.0) break;
            }
            taken[pick] = true;
            targets.push_back(pick);
        }
        for (std::size_t u : targets) {
            w(u, v) = w(v, u) = 1.0;
            degree[u] += 1.0;
            degree[v] += 1.0;
        }
    }
    return Graph(std::move(w), false);
}

Graph generate_ring(std::size_t n, std::size_t k) {
    if (k < 2 || k % 2 != 0 || k >= n)
        throw Error(ErrorKind::Parameter, "ring lattice requires even k with 2 <= k < n");
    Matrix w = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 1; d <= k / 2; ++d) {
            const std::size_t j = (i + d) % n;
            w(i, j) = w(j, i) = 1.0;
        }
    return Graph(std::move(w), false);
}

Matrix laplacian(const Graph& g, bool weighted) {
    if (g.directed())
        throw Error(ErrorKind::UnsupportedInput, "laplacian is defined for undirected graphs only");
    const Matrix a = weighted ? g.weights() : g.binary_adjacency();
    Matrix l = -a;
    l.diagonal() = a.rowwise().sum();
    return l;
}

Vector degrees(const Graph& g) { return g.binary_adjacency().rowwise().sum(); }

bool is_connected(const Graph& g) {
    const std::size_t n = g.n();
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t v = 0; v < n; ++v) {
            const bool linked = g.weights()(u, v) != 0.0 || g.weights()(v, u) != 0.0;
            if (linked && !seen[v]) {
                seen[v] = true;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == n;
}

SpectralDecomposition symmetric_eigen(const Matrix& a) {
    if (a.rows() != a.cols())
        throw Error(ErrorKind::NumericalInput, "eigendecomposition needs a square matrix");
    if (!a.allFinite()) throw Error(ErrorKind::NumericalInput, "matrix has non-finite entries");
    if (a.size() > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw Error(ErrorKind::NumericalInput, "matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NumericalFailure, "symmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix pseudoinverse(const Matrix& a, double rcond) {
    const SpectralDecomposition eig = symmetric_eigen(a);
    const Eigen::Index n = a.rows();
    if (n == 0) return Matrix(0, 0);
    const double cutoff = rcond * eig.eigenvalues.cwiseAbs().maxCoeff();
    Vector inv = Vector::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double lambda = eig.eigenvalues(k);
        if (std::abs(lambda) > cutoff) inv(k) = 1.0 / lambda;
    }
    Matrix p = eig.eigenvectors * inv.asDiagonal() * eig.eigenvectors.transpose();
    return (p + p.transpose()) * 0.5;
}

}  // namespace reconet
