#include "ebsbm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ebsbm/error.hpp"

namespace ebsbm::io {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line,
                             const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw Error(ErrorKind::Parse, msg.str());
}

std::uint64_t parse_uint(std::string_view token, std::string_view source,
                         std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    parse_fail(source, line, "expected a non-negative integer, got '" +
                                 std::string(token) + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

EdgeList parse_edge_list(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (!have_header) {
      if (tokens.size() != 6 || tokens[0] != "n" || tokens[2] != "m" ||
          tokens[4] != "directed" || tokens[5] != "multigraph") {
        parse_fail(source, line_no,
                   "expected header 'n <int> m <int> directed multigraph'");
      }
      n = parse_uint(tokens[1], source, line_no);
      m = parse_uint(tokens[3], source, line_no);
      edges.reserve(m);
      have_header = true;
      continue;
    }
    if (tokens.size() != 2) {
      parse_fail(source, line_no, "expected 'u v', got '" + line + "'");
    }
    const auto u = parse_uint(tokens[0], source, line_no);
    const auto v = parse_uint(tokens[1], source, line_no);
    if (u >= n || v >= n) {
      parse_fail(source, line_no,
                 "endpoint out of range [0, " + std::to_string(n) + ")");
    }
    edges.push_back(Edge{static_cast<Node>(u), static_cast<Node>(v)});
  }
  if (!have_header) parse_fail(source, line_no + 1, "missing header line");
  if (edges.size() != m) {
    parse_fail(source, line_no, "header announces " + std::to_string(m) +
                                    " edges but " + std::to_string(edges.size()) +
                                    " were read");
  }
  return EdgeList(n, std::move(edges));
}

EdgeList read_edge_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_edge_list(in, path.string());
}

void write_edge_list(const EdgeList& edges, std::ostream& out) {
  out << "n " << edges.num_nodes() << " m " << edges.size()
      << " directed multigraph\n";
  for (const auto& e : edges) out << e.src << ' ' << e.dst << '\n';
}

void write_edge_list(const EdgeList& edges, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_edge_list(edges, out);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Partition parse_partition(std::istream& in, std::size_t n,
                          std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<Node>> blocks;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    std::vector<Node> block;
    for (auto token : tokens) {
      const auto u = parse_uint(token, source, line_no);
      if (u >= n) {
        parse_fail(source, line_no, "node " + std::to_string(u) +
                                        " is outside [0, " + std::to_string(n) + ")");
      }
      block.push_back(static_cast<Node>(u));
    }
    blocks.push_back(std::move(block));
  }
  try {
    return Partition::make(n, std::move(blocks));
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(source) + ": " + e.what());
  }
}

Partition read_partition(const std::filesystem::path& path, std::size_t n) {
  auto in = open_input(path);
  return parse_partition(in, n, path.string());
}

void write_partition(const Partition& partition, std::ostream& out) {
  for (const auto& block : partition.blocks()) {
    for (std::size_t t = 0; t < block.size(); ++t) {
      if (t != 0) out << ' ';
      out << block[t];
    }
    out << '\n';
  }
}

EdgeList symmetrized(const EdgeList& edges) {
  std::vector<Edge> out;
  out.reserve(2 * edges.size());
  for (const auto& e : edges) {
    out.push_back(e);
    out.push_back(Edge{e.dst, e.src});
  }
  return EdgeList(edges.num_nodes(), std::move(out));
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace ebsbm::io
