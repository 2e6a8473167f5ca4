#pragma once

// Report documents: JSON (schema "relgeo4/1"), aligned-column text, and CSV
// of the per-point table. Doubles are always written with 17 significant
// digits; non-finite values become null.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relgeo4/bonnet.hpp"
#include "relgeo4/relative_frame.hpp"
#include "relgeo4/surface.hpp"

namespace relgeo4 {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "relgeo4/1";

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_string(std::ostringstream& os, const std::string& s) {
  os << Json(s).dump();
}

inline std::string scalar_text(const Json& j) {
  if (j.is_number_float()) return format_double(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline void write_json(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << pad;
      write_string(os, it.key());
      os << ": ";
      write_json(os, it.value(), indent + 2);
    }
    os << "\n" << close << "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : j) flat = flat && e.is_primitive();
    if (flat) {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ", ";
        write_json(os, j[i], indent);
      }
      os << "]";
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << ",\n";
      os << pad;
      write_json(os, j[i], indent + 2);
    }
    os << "\n" << close << "]";
  } else if (j.is_number_float()) {
    os << format_double(j.get<double>());
  } else {
    os << j.dump();
  }
}

inline void flatten_into(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, scalar_text(j));
  }
}

inline void write_table(std::ostringstream& os, const Json& rows) {
  std::vector<std::string> header;
  std::vector<std::vector<std::pair<std::string, std::string>>> flat;
  for (const auto& r : rows) {
    flat.emplace_back();
    flatten_into(r, "", flat.back());
    for (const auto& [k, v] : flat.back())
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
  }
  std::vector<std::size_t> width;
  for (const auto& h : header) width.push_back(h.size());
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : flat) {
    std::vector<std::string> line(header.size(), "-");
    for (const auto& [k, v] : row) {
      const auto idx = static_cast<std::size_t>(std::find(header.begin(), header.end(), k) - header.begin());
      line[idx] = v;
    }
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    os << " ";
    for (std::size_t c = 0; c < line.size(); ++c) {
      os << " " << line[c];
      if (c + 1 < line.size()) os << std::string(width[c] - line[c].size(), ' ');
    }
    os << "\n";
  };
  emit(header);
  for (const auto& line : cells) emit(line);
}

}  // namespace detail

/// Pretty-printed JSON with 17-digit doubles and a trailing newline.
inline std::string to_json_text(const Json& j) {
  std::ostringstream os;
  detail::write_json(os, j, 0);
  os << "\n";
  return os.str();
}

/// Flattened key/value pairs: nested keys joined with '.', array items as [i].
inline std::vector<std::pair<std::string, std::string>> flatten(const Json& j) {
  std::vector<std::pair<std::string, std::string>> out;
  detail::flatten_into(j, "", out);
  return out;
}

/// Human-readable report: header, summary, candidates, then the point table.
inline std::string to_text(const Json& report) {
  std::ostringstream os;
  os << "relgeo4 " << report.value("command", std::string()) << "\n";
  if (report.contains("surface") && report["surface"].is_object())
    os << "surface: " << report["surface"].value("name", std::string()) << "\n";
  if (report.contains("grid") && report["grid"].is_array() && report["grid"].size() == 3)
    os << "grid: " << report["grid"][0] << "x" << report["grid"][1] << "x" << report["grid"][2] << "\n";
  if (report.contains("summary")) {
    os << "\nsummary:\n";
    const auto flat = flatten(report["summary"]);
    std::size_t w = 0;
    for (const auto& [k, v] : flat) w = std::max(w, k.size());
    for (const auto& [k, v] : flat) os << "  " << k << std::string(w - k.size() + 2, ' ') << v << "\n";
  }
  for (const char* table : {"checks", "candidates", "points"}) {
    if (report.contains(table) && report[table].is_array() && !report[table].empty()) {
      os << "\n" << table << ":\n";
      detail::write_table(os, report[table]);
    }
  }
  return os.str();
}

/// CSV of the per-point table with a header row.
inline std::string to_csv(const Json& report) {
  std::ostringstream os;
  if (!report.contains("points") || !report["points"].is_array()) return {};
  std::vector<std::string> header;
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  for (const auto& p : report["points"]) {
    rows.push_back(flatten(p));
    for (const auto& [k, v] : rows.back())
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
  }
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << quote(header[c]);
  os << "\n";
  for (const auto& row : rows) {
    std::vector<std::string> line(header.size());
    for (const auto& [k, v] : row)
      line[static_cast<std::size_t>(std::find(header.begin(), header.end(), k) - header.begin())] = v;
    for (std::size_t c = 0; c < line.size(); ++c) os << (c ? "," : "") << quote(line[c]);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Building blocks

inline Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json surface_json(const SurfaceSpec& spec) {
  Json s;
  s["name"] = spec.name;
  s["x"] = Json::array({spec.x_source[0], spec.x_source[1], spec.x_source[2], spec.x_source[3]});
  Json dom = Json::array();
  for (const auto& d : spec.domain) dom.push_back(Json::array({d.lo, d.hi}));
  s["domain"] = dom;
  s["normalization"] = to_string(spec.normalization.kind);
  if (spec.normalization.kind == NormalizationKind::Custom) s["q"] = spec.normalization.q_source;
  s["orientation"] = spec.orientation;
  s["orientation_source"] = spec.orientation_override ? "configured" : "auto";
  return s;
}

inline Json grid_json(const GridShape& g) { return Json::array({g.n[0], g.n[1], g.n[2]}); }

inline Json point_json(const ChartPoint& p) { return Json::array({p[0], p[1], p[2]}); }

inline Json curvature_json(const CurvatureSet& c) {
  Json j;
  j["H"] = c.H;
  j["H2"] = c.H2;
  j["K"] = c.K;
  j["kappa"] = Json::array({c.kappas[0], c.kappas[1], c.kappas[2]});
  j["real_kappa"] = c.real_eigenvalues;
  j["R"] = Json::array({optional_json(c.radii[0]), optional_json(c.radii[1]), optional_json(c.radii[2])});
  return j;
}

inline Json residuals_json(const FrameResiduals& r) {
  Json j;
  j["weingarten"] = r.weingarten;
  j["conormal_tangent"] = r.conormal_tangent;
  j["conormal_unit"] = r.conormal_unit;
  j["conormal_xi"] = r.conormal_xi;
  j["b_symmetry"] = r.b_symmetry;
  j["tangency"] = r.tangency;
  j["index_raise"] = r.index_raise;
  j["g_relation"] = r.g_relation;
  j["b_second_form"] = optional_json(r.b_second_form);
  return j;
}

inline Json constancy_json(const ConstancyReport& r) {
  Json j;
  j["field"] = r.field;
  j["mean"] = r.mean;
  j["max_abs_deviation"] = r.max_abs_deviation;
  j["relative_spread"] = r.relative_spread;
  j["tolerance"] = r.tolerance;
  j["constant"] = r.verdict;
  return j;
}

inline Json candidate_json(const BonnetCandidate& c) {
  Json j;
  j["mu"] = c.mu;
  j["predicted_field"] = to_string(c.predicted_field) + "*";
  j["predicted_value"] = c.predicted_value;
  j["W"] = optional_json(c.W);
  j["certificate"] = c.certificate;
  return j;
}

}  // namespace relgeo4
