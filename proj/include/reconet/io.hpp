#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "reconet/graph.hpp"

namespace reconet::io {

// Edge list text format:
//   # nodes=N directed={0|1}     optional header, must precede data lines
//   u v [w]                      0-based ids, weight defaults to 1
// Other '#' lines are comments. Without a header N = max id + 1 and the
// graph is undirected. Errors carry the offending line number.
Graph parse_edgelist(std::istream& in);
Graph read_edgelist(const std::filesystem::path& path);
void format_edgelist(const Graph& g, std::ostream& out);
void write_edgelist(const Graph& g, const std::filesystem::path& path);

// Matrix CSV: comma-separated decimals, one row per line, no header.
// Values are written with 17 significant digits so parsing restores them exactly.
Matrix parse_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);
void format_matrix_csv(const Matrix& m, std::ostream& out);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace reconet::io
