#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace reconet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense weighted graph. Entry (i, j) of the weight matrix is the weight of
/// edge i -> j, zero meaning absent. The diagonal is always zero and
/// undirected graphs hold an exactly symmetric matrix.
class Graph {
public:
    /// Empty graph on n nodes.
    explicit Graph(std::size_t n, bool directed = false);

    /// Validates the invariants; throws Error on violation.
    Graph(Matrix weights, bool directed);

    static Graph from_edges(std::size_t n,
                            const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                            bool directed = false);

    std::size_t n() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
    bool directed() const noexcept { return directed_; }
    const Matrix& weights() const noexcept { return weights_; }

    bool has_edge(std::size_t i, std::size_t j) const { return weights_(i, j) != 0.0; }

    /// Unordered pairs for undirected graphs, ordered pairs otherwise.
    std::size_t edge_count() const;

    /// 0/1 adjacency.
    Matrix binary_adjacency() const;

    std::vector<std::size_t> neighbors(std::size_t i) const;

    bool operator==(const Graph& other) const {
        return directed_ == other.directed_ && weights_.rows() == other.weights_.rows() &&
               weights_ == other.weights_;
    }

private:
    Matrix weights_;
    bool directed_ = false;
};

struct SpectralDecomposition {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

Graph complete_graph(std::size_t n);
Graph path_graph(std::size_t n);

Graph generate_er(std::size_t n, double p, std::uint64_t seed);
Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed);
Graph generate_ring(std::size_t n, std::size_t k);

/// L = D - A. Binarized adjacency unless `weighted` is set.
Matrix laplacian(const Graph& g, bool weighted = false);

/// Binarized row sums (out-degree for directed graphs).
Vector degrees(const Graph& g);

bool is_connected(const Graph& g);

SpectralDecomposition symmetric_eigen(const Matrix& a);

inline constexpr double kPinvRcond = 1e-10;

/// Moore-Penrose pseudoinverse of a symmetric matrix; eigenvalues with
/// |lambda| <= rcond * max|lambda| are dropped.
Matrix pseudoinverse(const Matrix& a, double rcond = kPinvRcond);

}  // namespace reconet
