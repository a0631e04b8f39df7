#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cnbt/error.hpp"
#include "cnbt/graph.hpp"

namespace cnbt::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_int(std::string_view s, long long& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

[[noreturn]] inline void fail(const std::string& source, int line, const std::string& what) {
  throw InvalidInput(source + ":" + std::to_string(line) + ": " + what);
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return in;
}

}  // namespace detail

/// Tab-separated "from<TAB>to" lines. Lines starting with '#' are comments;
/// "# n=<count>" fixes the vertex count, otherwise n = max id + 1.
inline DirectedGraph read_edge_list(std::istream& in, const std::string& source = "<stream>") {
  std::vector<Edge> edges;
  std::vector<int> edge_lines;
  long long declared = -1;
  long long max_id = -1;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string_view s = detail::trim(raw);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const std::string_view body = detail::trim(s.substr(1));
      if (body.rfind("n=", 0) == 0) {
        long long n = 0;
        if (!detail::parse_int(body.substr(2), n) || n < 0) detail::fail(source, line, "bad vertex-count header");
        declared = n;
      }
      continue;
    }
    const auto tab = s.find('\t');
    long long u = 0, v = 0;
    if (tab == std::string_view::npos || !detail::parse_int(s.substr(0, tab), u) ||
        !detail::parse_int(s.substr(tab + 1), v)) {
      detail::fail(source, line, "expected two tab-separated integers, got '" + std::string(s) + "'");
    }
    if (u < 0 || v < 0) detail::fail(source, line, "negative vertex id");
    if (u == v) detail::fail(source, line, "self-loop at vertex " + std::to_string(u));
    if (u > INT32_MAX || v > INT32_MAX) detail::fail(source, line, "vertex id too large");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    edge_lines.push_back(line);
    max_id = std::max({max_id, u, v});
  }
  const long long n = declared >= 0 ? declared : max_id + 1;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].from >= n || edges[i].to >= n) {
      detail::fail(source, edge_lines[i], "vertex id exceeds declared n=" + std::to_string(n));
    }
  }
  // Report duplicates with their line before graph construction does.
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edges[a] != edges[b] ? edges[a] < edges[b] : a < b;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (edges[order[i]] == edges[order[i - 1]]) detail::fail(source, edge_lines[order[i]], "duplicate edge");
  }
  return DirectedGraph(static_cast<Vertex>(n), std::move(edges));
}

inline DirectedGraph read_edge_list(const std::string& path) {
  auto in = detail::open_in(path);
  return read_edge_list(in, path);
}

inline void write_edge_list(const DirectedGraph& g, std::ostream& out) {
  out << "# n=" << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) out << e.from << '\t' << e.to << '\n';
}

inline void write_edge_list(const DirectedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  write_edge_list(g, out);
}

/// One integer label per line; blank lines and '#' comments are skipped.
inline std::vector<int> read_labels(std::istream& in, const std::string& source = "<stream>") {
  std::vector<int> labels;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string_view s = detail::trim(raw);
    if (s.empty() || s.front() == '#') continue;
    long long x = 0;
    if (!detail::parse_int(s, x) || x < INT32_MIN || x > INT32_MAX) {
      detail::fail(source, line, "expected an integer label, got '" + std::string(s) + "'");
    }
    labels.push_back(static_cast<int>(x));
  }
  return labels;
}

inline std::vector<int> read_labels(const std::string& path) {
  auto in = detail::open_in(path);
  return read_labels(in, path);
}

inline void write_labels(const std::vector<int>& labels, std::ostream& out) {
  for (int l : labels) out << l << '\n';
}

inline void write_labels(const std::vector<int>& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  write_labels(labels, out);
}

}  // namespace cnbt::io
