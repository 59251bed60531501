#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "error.hpp"
#include "hypergraph.hpp"

namespace hypex {

// Text format:
//   # comment lines anywhere
//   k n m
//   m lines of k strictly increasing vertex indices
// Writers add a single "# meta {...}" comment when meta is non-empty;
// readers restore it.

namespace detail {

inline std::string trim_cr(std::string s) {
  if (!s.empty() && s.back() == '\r')
    s.pop_back();
  return s;
}

inline std::vector<std::uint64_t> parse_uints(const std::string &line, std::size_t lineno) {
  std::vector<std::uint64_t> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    if (line[i] < '0' || line[i] > '9')
      throw parse_error("line " + std::to_string(lineno) + ": unexpected character '" +
                        std::string(1, line[i]) + "'");
    std::uint64_t v = 0;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
      v = v * 10 + static_cast<std::uint64_t>(line[i] - '0');
      if (v > (std::uint64_t{1} << 40))
        throw parse_error("line " + std::to_string(lineno) + ": number too large");
      ++i;
    }
    out.push_back(v);
  }
  return out;
}

} // namespace detail

inline hypergraph read_hg(std::istream &in) {
  std::string raw;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t k = 0, n = 0, m = 0;
  json meta = json::object();
  std::vector<vertex> flat;
  std::set<std::vector<vertex>> seen;
  std::size_t edges_read = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim_cr(raw);
    if (line.empty())
      continue;
    if (line[0] == '#') {
      const std::string tag = "# meta ";
      if (line.rfind(tag, 0) == 0) {
        try {
          meta = json::parse(line.substr(tag.size()));
        } catch (const json::exception &ex) {
          throw parse_error("line " + std::to_string(lineno) + ": bad meta JSON: " + ex.what());
        }
      }
      continue;
    }
    auto nums = detail::parse_uints(line, lineno);
    if (!have_header) {
      if (nums.size() != 3)
        throw parse_error("line " + std::to_string(lineno) + ": header must be \"k n m\"");
      k = nums[0];
      n = nums[1];
      m = nums[2];
      if (k == 0)
        throw parse_error("line " + std::to_string(lineno) + ": uniformity must be positive");
      have_header = true;
      continue;
    }
    if (edges_read == m)
      throw parse_error("line " + std::to_string(lineno) + ": more than " + std::to_string(m) +
                        " edge lines");
    if (nums.size() != k)
      throw parse_error("line " + std::to_string(lineno) + ": expected " + std::to_string(k) +
                        " vertices, got " + std::to_string(nums.size()));
    std::vector<vertex> e(nums.begin(), nums.end());
    for (std::size_t j = 0; j < k; ++j) {
      if (nums[j] >= n)
        throw parse_error("line " + std::to_string(lineno) + ": vertex " +
                          std::to_string(nums[j]) + " >= n = " + std::to_string(n));
      if (j > 0 && nums[j] <= nums[j - 1])
        throw parse_error("line " + std::to_string(lineno) + ": edge not strictly increasing");
    }
    if (!seen.insert(e).second)
      throw parse_error("line " + std::to_string(lineno) + ": duplicate edge");
    flat.insert(flat.end(), e.begin(), e.end());
    ++edges_read;
  }
  if (!have_header)
    throw parse_error("line " + std::to_string(lineno) + ": missing header");
  if (edges_read != m)
    throw parse_error("line " + std::to_string(lineno) + ": expected " + std::to_string(m) +
                      " edges, found " + std::to_string(edges_read));
  return hypergraph(n, k, std::move(flat)).with_meta(std::move(meta));
}

inline void write_hg(std::ostream &out, const hypergraph &h) {
  if (!h.meta().is_null() && !h.meta().empty())
    out << "# meta " << h.meta().dump() << '\n';
  out << h.k() << ' ' << h.n() << ' ' << h.size() << '\n';
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto e = h.edge(i);
    for (std::size_t j = 0; j < e.size(); ++j)
      out << (j ? " " : "") << e[j];
    out << '\n';
  }
}

inline std::string to_text(const hypergraph &h) {
  std::ostringstream os;
  write_hg(os, h);
  return os.str();
}

inline hypergraph from_text(const std::string &text) {
  std::istringstream is(text);
  return read_hg(is);
}

inline json to_json(const hypergraph &h) {
  json j;
  j["k"] = h.k();
  j["n"] = h.n();
  j["edges"] = h.edge_list();
  j["meta"] = h.meta().is_null() ? json::object() : h.meta();
  return j;
}

inline hypergraph hypergraph_from_json(const json &j) {
  try {
    auto k = j.at("k").get<std::size_t>();
    auto n = j.at("n").get<std::size_t>();
    auto edges = j.at("edges").get<std::vector<std::vector<std::uint64_t>>>();
    std::set<std::vector<std::uint64_t>> seen;
    std::vector<vertex> flat;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto &e = edges[i];
      const std::string where = "edge " + std::to_string(i) + ": ";
      if (e.size() != k)
        throw parse_error(where + "wrong size");
      for (std::size_t t = 0; t < e.size(); ++t) {
        if (e[t] >= n)
          throw parse_error(where + "vertex out of range");
        if (t > 0 && e[t] <= e[t - 1])
          throw parse_error(where + "not strictly increasing");
      }
      if (!seen.insert(e).second)
        throw parse_error(where + "duplicate edge");
      flat.insert(flat.end(), e.begin(), e.end());
    }
    if (k == 0)
      throw parse_error("uniformity must be positive");
    json meta = j.contains("meta") ? j.at("meta") : json::object();
    return hypergraph(n, k, std::move(flat)).with_meta(std::move(meta));
  } catch (const json::exception &ex) {
    throw parse_error(std::string("hypergraph JSON: ") + ex.what());
  }
}

/// Reads either format, dispatching on the first non-blank character.
inline hypergraph read_hg_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw parse_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return hypergraph_from_json(json::parse(text));
    } catch (const json::parse_error &ex) {
      throw parse_error(path + ": " + ex.what());
    }
  }
  return from_text(text);
}

inline void write_hg_file(const std::string &path, const hypergraph &h, bool as_json = false) {
  std::ofstream out(path);
  if (!out)
    throw parse_error("cannot write " + path);
  if (as_json)
    out << to_json(h).dump(1) << '\n';
  else
    write_hg(out, h);
  if (!out)
    throw parse_error("write failed: " + path);
}

} // namespace hypex
