#pragma once

// Surface spec files (.surf): a line-oriented key = value format.
//
//   [surface]
//   name = "sphere-r2"
//   x1 = "2*cos(u1)*cos(u2)*cos(u3)"
//   ...
//   u1 = [0.2, 1.2]
//   grid = "7x7x7"            # optional
//   [normalization]
//   mode = "euclidean"        # or "equiaffine", or "custom" with q = "<expr>"
//   orientation = "auto"      # or 1 / -1
//
// Grid points sit at cell centres, half a step inside the domain box.

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "relgeo4/errors.hpp"
#include "relgeo4/expr.hpp"
#include "relgeo4/relative_frame.hpp"

namespace relgeo4 {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct GridShape {
  std::array<int, 3> n{7, 7, 7};
  std::size_t count() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  std::string to_string() const {
    return std::to_string(n[0]) + "x" + std::to_string(n[1]) + "x" + std::to_string(n[2]);
  }
};

/// "AxBxC" with positive integers.
inline GridShape parse_grid(std::string_view text) {
  GridShape g;
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t end = k < 2 ? text.find_first_of("xX", pos) : text.size();
    if (end == std::string_view::npos) throw FormatError("grid must look like AxBxC, got '" + std::string(text) + "'");
    const std::string_view part = text.substr(pos, end - pos);
    int v = 0;
    auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (res.ec != std::errc{} || res.ptr != part.data() + part.size() || v <= 0)
      throw FormatError("grid must look like AxBxC with positive integers, got '" + std::string(text) + "'");
    g.n[static_cast<std::size_t>(k)] = v;
    pos = end + 1;
  }
  return g;
}

struct SurfaceSpec {
  std::string name;
  std::array<std::string, 4> x_source;
  std::array<Expression, 4> x;
  std::array<Interval, 3> domain;
  NormalizationMode normalization;
  std::optional<int> orientation_override;  // nullopt: auto
  int orientation = 1;                      // resolved by validate_spec
  GridShape grid;

  ChartPoint center() const {
    return {0.5 * (domain[0].lo + domain[0].hi), 0.5 * (domain[1].lo + domain[1].hi),
            0.5 * (domain[2].lo + domain[2].hi)};
  }
};

/// Cell-centre sample points, u1 slowest and u3 fastest.
inline std::vector<ChartPoint> grid_points(const SurfaceSpec& spec, const GridShape& grid) {
  std::vector<ChartPoint> pts;
  pts.reserve(grid.count());
  std::array<double, 3> step{};
  for (std::size_t k = 0; k < 3; ++k) step[k] = (spec.domain[k].hi - spec.domain[k].lo) / grid.n[k];
  for (int i = 0; i < grid.n[0]; ++i)
    for (int j = 0; j < grid.n[1]; ++j)
      for (int k = 0; k < grid.n[2]; ++k)
        pts.push_back({spec.domain[0].lo + (i + 0.5) * step[0], spec.domain[1].lo + (j + 0.5) * step[1],
                       spec.domain[2].lo + (k + 0.5) * step[2]});
  return pts;
}

inline std::vector<ChartPoint> grid_points(const SurfaceSpec& spec) { return grid_points(spec, spec.grid); }

namespace detail {

struct RawValue {
  enum class Kind { String, Interval, Bare } kind = Kind::Bare;
  std::string text;
  Interval interval;
  int line = 0;
};

[[noreturn]] inline void format_fail(const std::string& origin, int line, const std::string& msg) {
  throw FormatError(origin + ":" + std::to_string(line) + ": " + msg);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view s, const std::string& origin, int line, const std::string& key) {
  s = trim(s);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    format_fail(origin, line, "key '" + key + "': expected a number, got '" + std::string(s) + "'");
  return v;
}

// Parses one value, then rejects anything after it but a comment.
inline RawValue parse_value(std::string_view v, const std::string& origin, int line, const std::string& key) {
  RawValue out;
  out.line = line;
  v = trim(v);
  if (v.empty()) format_fail(origin, line, "key '" + key + "' has no value");
  std::string_view rest;
  if (v.front() == '"') {
    const std::size_t close = v.find('"', 1);
    if (close == std::string_view::npos) format_fail(origin, line, "key '" + key + "': unterminated string");
    out.kind = RawValue::Kind::String;
    out.text = std::string(v.substr(1, close - 1));
    rest = v.substr(close + 1);
  } else if (v.front() == '[') {
    const std::size_t close = v.find(']');
    if (close == std::string_view::npos) format_fail(origin, line, "key '" + key + "': unterminated interval");
    const std::string_view body = v.substr(1, close - 1);
    const std::size_t comma = body.find(',');
    if (comma == std::string_view::npos) format_fail(origin, line, "key '" + key + "': interval needs two bounds");
    out.kind = RawValue::Kind::Interval;
    out.interval.lo = parse_double(body.substr(0, comma), origin, line, key);
    out.interval.hi = parse_double(body.substr(comma + 1), origin, line, key);
    rest = v.substr(close + 1);
  } else {
    const std::size_t hash = v.find('#');
    out.kind = RawValue::Kind::Bare;
    out.text = std::string(trim(v.substr(0, hash)));
    rest = {};
  }
  rest = trim(rest);
  if (!rest.empty() && rest.front() != '#')
    format_fail(origin, line, "key '" + key + "': unexpected text after value: '" + std::string(rest) + "'");
  return out;
}

}  // namespace detail

/// Parse spec text without geometric validation. Throws FormatError naming
/// the offending key and line.
inline SurfaceSpec parse_spec(std::string_view text, const std::string& origin = "<spec>") {
  using detail::format_fail;
  using detail::RawValue;
  std::map<std::string, std::map<std::string, RawValue>> sections;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      const std::size_t close = line.find(']');
      if (close == std::string_view::npos) format_fail(origin, line_no, "unterminated section header");
      section = std::string(detail::trim(line.substr(1, close - 1)));
      if (section != "surface" && section != "normalization")
        format_fail(origin, line_no, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) format_fail(origin, line_no, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    if (section.empty()) format_fail(origin, line_no, "key '" + key + "' outside of any section");
    RawValue value = detail::parse_value(line.substr(eq + 1), origin, line_no, key);
    auto& sec = sections[section];
    if (sec.count(key)) format_fail(origin, line_no, "duplicate key '" + key + "'");
    sec.emplace(key, std::move(value));
  }

  auto& surf = sections["surface"];
  auto& norm = sections["normalization"];
  static const std::array<std::string, 8> surface_keys{"name", "x1", "x2", "x3", "x4", "u1", "u2", "u3"};
  for (const auto& [key, value] : surf) {
    bool known = key == "grid";
    for (const auto& k : surface_keys) known = known || key == k;
    if (!known) format_fail(origin, value.line, "unknown key '" + key + "' in [surface]");
  }
  for (const auto& [key, value] : norm)
    if (key != "mode" && key != "q" && key != "orientation")
      format_fail(origin, value.line, "unknown key '" + key + "' in [normalization]");

  auto require = [&](std::map<std::string, RawValue>& sec, const std::string& sec_name,
                     const std::string& key) -> RawValue& {
    auto it = sec.find(key);
    if (it == sec.end()) throw FormatError(origin + ": missing key '" + key + "' in [" + sec_name + "]");
    return it->second;
  };
  auto require_string = [&](std::map<std::string, RawValue>& sec, const std::string& sec_name,
                            const std::string& key) -> const RawValue& {
    const RawValue& v = require(sec, sec_name, key);
    if (v.kind != RawValue::Kind::String) format_fail(origin, v.line, "key '" + key + "' must be a quoted string");
    return v;
  };

  SurfaceSpec spec;
  spec.name = require_string(surf, "surface", "name").text;
  for (int i = 0; i < 4; ++i) {
    const std::string key = "x" + std::to_string(i + 1);
    const RawValue& v = require_string(surf, "surface", key);
    spec.x_source[static_cast<std::size_t>(i)] = v.text;
    try {
      spec.x[static_cast<std::size_t>(i)] = parse(v.text);
    } catch (const Error& e) {
      format_fail(origin, v.line, "key '" + key + "': " + e.kind() + ": " + e.what());
    }
  }
  for (int i = 0; i < 3; ++i) {
    const std::string key = "u" + std::to_string(i + 1);
    const RawValue& v = require(surf, "surface", key);
    if (v.kind != RawValue::Kind::Interval) format_fail(origin, v.line, "key '" + key + "' must be an interval [a, b]");
    if (!(v.interval.hi > v.interval.lo))
      format_fail(origin, v.line, "key '" + key + "': interval must satisfy a < b");
    spec.domain[static_cast<std::size_t>(i)] = v.interval;
  }
  if (auto it = surf.find("grid"); it != surf.end()) {
    try {
      spec.grid = parse_grid(it->second.text);
    } catch (const FormatError& e) {
      format_fail(origin, it->second.line, std::string("key 'grid': ") + e.what());
    }
  }

  const RawValue& mode = require(norm, "normalization", "mode");
  if (mode.text == "euclidean") {
    spec.normalization = NormalizationMode::euclidean();
  } else if (mode.text == "equiaffine") {
    spec.normalization = NormalizationMode::equiaffine();
  } else if (mode.text == "custom") {
    const RawValue& q = require_string(norm, "normalization", "q");
    try {
      spec.normalization = NormalizationMode::custom(q.text);
    } catch (const Error& e) {
      format_fail(origin, q.line, std::string("key 'q': ") + e.kind() + ": " + e.what());
    }
  } else {
    format_fail(origin, mode.line, "key 'mode': expected euclidean, equiaffine or custom, got '" + mode.text + "'");
  }
  if (mode.text != "custom" && norm.count("q"))
    format_fail(origin, norm.at("q").line, "key 'q' is only valid with mode = \"custom\"");

  if (auto it = norm.find("orientation"); it != norm.end()) {
    const std::string& o = it->second.text;
    if (o == "auto") spec.orientation_override.reset();
    else if (o == "1" || o == "+1") spec.orientation_override = 1;
    else if (o == "-1") spec.orientation_override = -1;
    else format_fail(origin, it->second.line, "key 'orientation': expected auto, 1 or -1, got '" + o + "'");
  }
  return spec;
}

inline std::string format_point(const ChartPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p[0] << ", " << p[1] << ", " << p[2] << ")";
  return os.str();
}

/// Resolve the orientation and build the frame at every grid point.
/// Throws ValidationError naming the point and the failed check.
inline void validate_spec(SurfaceSpec& spec) {
  try {
    spec.orientation = spec.orientation_override ? *spec.orientation_override : auto_orientation(spec.x, spec.center());
  } catch (const Error& e) {
    throw ValidationError("domain centre " + format_point(spec.center()) + " failed " + e.kind() + ": " + e.what(),
                          e.kind());
  }
  for (const auto& p : grid_points(spec)) {
    try {
      (void)build_frame<kDefaultJetOrder>(spec.x, spec.normalization, spec.orientation, p);
    } catch (const Error& e) {
      throw ValidationError("grid point " + format_point(p) + " failed " + e.kind() + ": " + e.what(), e.kind());
    }
  }
}

inline SurfaceSpec load_spec_text(std::string_view text, const std::string& origin = "<spec>") {
  SurfaceSpec spec = parse_spec(text, origin);
  validate_spec(spec);
  return spec;
}

inline SurfaceSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_spec_text(buf.str(), path);
}

}  // namespace relgeo4
