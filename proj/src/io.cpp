#include "reconet/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "reconet/error.hpp"

namespace reconet::io {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    return out;
}

// Dense storage; ids beyond this are treated as overflow.
constexpr std::size_t kMaxNodes = 100000;

bool parse_index(const std::string& token, std::size_t& value) {
    if (token.empty() || token[0] == '-' || token[0] == '+') return false;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    return ec == std::errc() && ptr == token.data() + token.size() && value < kMaxNodes;
}

bool parse_real(const std::string& token, double& value) {
    if (token.empty()) return false;
    // strtod accepts nan/inf spellings, which the matrix format relies on for NaN cells.
    char* end = nullptr;
    value = std::strtod(token.c_str(), &end);
    return end == token.c_str() + token.size();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Graph parse_edgelist(std::istream& in) {
    struct Edge {
        std::size_t u, v;
        double w;
        std::size_t line;
    };
    std::vector<Edge> edges;
    bool have_header = false;
    std::size_t header_n = 0;
    bool directed = false;
    std::size_t max_id = 0;
    bool any_edge = false;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string a, b;
            hs >> a >> b;
            if (a.rfind("nodes=", 0) == 0) {
                if (have_header || !edges.empty()) parse_fail(line_no, "header must come first and only once");
                if (!parse_index(a.substr(6), header_n) || header_n == 0)
                    parse_fail(line_no, "invalid node count in header");
                if (b == "directed=1") directed = true;
                else if (b == "directed=0" || b.empty()) directed = false;
                else parse_fail(line_no, "invalid directed flag in header");
                have_header = true;
            }
            continue;
        }
        std::istringstream ls(line);
        std::string su, sv, sw, extra;
        ls >> su >> sv >> sw >> extra;
        if (sv.empty()) parse_fail(line_no, "expected 'u v [w]'");
        if (!extra.empty()) parse_fail(line_no, "too many fields");
        Edge e{0, 0, 1.0, line_no};
        if (!parse_index(su, e.u) || !parse_index(sv, e.v))
            parse_fail(line_no, "node ids must be non-negative integers");
        if (!sw.empty() && !parse_real(sw, e.w)) parse_fail(line_no, "non-numeric weight '" + sw + "'");
        if (!std::isfinite(e.w) || e.w == 0.0) parse_fail(line_no, "weight must be finite and non-zero");
        if (e.u == e.v) parse_fail(line_no, "self-loop on node " + su);
        max_id = std::max({max_id, e.u, e.v});
        any_edge = true;
        edges.push_back(e);
    }

    const std::size_t n = have_header ? header_n : (any_edge ? max_id + 1 : 0);
    if (n == 0) throw Error(ErrorKind::Parse, "edge list is empty and has no header");
    Matrix w = Matrix::Zero(n, n);
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) parse_fail(e.line, "node id exceeds header node count");
        auto set = [&](std::size_t a, std::size_t b) {
            if (w(a, b) != 0.0 && w(a, b) != e.w) parse_fail(e.line, "duplicate edge with conflicting weight");
            w(a, b) = e.w;
        };
        set(e.u, e.v);
        if (!directed) set(e.v, e.u);
    }
    return Graph(std::move(w), directed);
}

Graph read_edgelist(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return parse_edgelist(in);
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

void format_edgelist(const Graph& g, std::ostream& out) {
    out << "# nodes=" << g.n() << " directed=" << (g.directed() ? 1 : 0) << '\n';
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = g.directed() ? 0 : i + 1; j < g.n(); ++j) {
            const double w = g.weights()(i, j);
            if (w == 0.0) continue;
            out << i << ' ' << j;
            if (w != 1.0) out << ' ' << format_double(w);
            out << '\n';
        }
}

void write_edgelist(const Graph& g, const std::filesystem::path& path) {
    auto out = open_out(path);
    format_edgelist(g, out);
}

Matrix parse_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (trim(raw).empty()) continue;
        std::vector<double> row;
        std::size_t col = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = raw.find(',', start);
            const std::string token = trim(raw.substr(start, comma - start));
            ++col;
            double v = 0.0;
            if (!parse_real(token, v))
                throw Error(ErrorKind::Parse, "row " + std::to_string(line_no) + ", column " +
                                                  std::to_string(col) + ": non-numeric token '" +
                                                  token + "'");
            row.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error(ErrorKind::Parse, "row " + std::to_string(line_no) + ": expected " +
                                              std::to_string(rows.front().size()) + " columns, got " +
                                              std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::Parse, "matrix file is empty");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return parse_matrix_csv(in);
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

void format_matrix_csv(const Matrix& m, std::ostream& out) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
    auto out = open_out(path);
    format_matrix_csv(m, out);
}

}  // namespace reconet::io
