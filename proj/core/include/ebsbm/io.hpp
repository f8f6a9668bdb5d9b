#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "ebsbm/model.hpp"

namespace ebsbm::io {

// Edge-list format:
//
//   n <int> m <int> directed multigraph
//   u v
//   ...
//
// 0-based endpoints, one edge per line, order significant. Parse errors
// carry the 1-based line number.
EdgeList parse_edge_list(std::istream& in, std::string_view source = "<stream>");
EdgeList read_edge_list(const std::filesystem::path& path);
void write_edge_list(const EdgeList& edges, std::ostream& out);
void write_edge_list(const EdgeList& edges, const std::filesystem::path& path);

// Partition format: one block per line, nodes as space-separated 0-based
// integers; blank lines and lines starting with '#' are ignored.
Partition parse_partition(std::istream& in, std::size_t n,
                          std::string_view source = "<stream>");
Partition read_partition(const std::filesystem::path& path, std::size_t n);
void write_partition(const Partition& partition, std::ostream& out);

/// Both orientations of every edge, in place: (u,v) becomes (u,v), (v,u).
/// Self-loops are emitted twice as well.
EdgeList symmetrized(const EdgeList& edges);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace ebsbm::io
