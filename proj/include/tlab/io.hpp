#pragma once

// Text formats: the TLAB-GRID v1 grid file, the JSON check report and the bowl
// profile CSV. Reals are written with 17 significant digits so that a read/write
// cycle reproduces every value exactly.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tlab/checks.hpp"
#include "tlab/errors.hpp"
#include "tlab/grid.hpp"
#include "tlab/soliton_forms.hpp"

namespace tlab {

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_real(std::string_view tok, const std::string& context) {
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw FormatError(context + ": '" + std::string(tok) + "' is not a finite real");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Grid file

inline void write_grid(std::ostream& os, const GridFunction& u) {
  const GridSpec& s = u.spec();
  const Rect& d = s.domain();
  os << "TLAB-GRID v1 " << s.nx() << ' ' << s.ny() << ' ' << format_real(d.x1_min) << ' ' << format_real(d.x1_max)
     << ' ' << format_real(d.x2_min) << ' ' << format_real(d.x2_max) << '\n';
  std::string line;
  for (std::size_t j = 0; j < s.ny(); ++j) {
    line.clear();
    for (std::size_t i = 0; i < s.nx(); ++i) {
      if (i) line += ' ';
      line += format_real(u(i, j));
    }
    line += '\n';
    os << line;
  }
}

inline GridFunction read_grid(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw FormatError("grid file is empty");
  std::istringstream hs(header);
  std::string magic, version, tok;
  std::vector<std::string> fields;
  hs >> magic >> version;
  if (magic != "TLAB-GRID" || version != "v1") throw FormatError("not a TLAB-GRID v1 file");
  while (hs >> tok) fields.push_back(tok);
  if (fields.size() != 6) throw FormatError("grid header needs nx ny x1_min x1_max x2_min x2_max");
  std::size_t nx = 0, ny = 0;
  for (int k = 0; k < 2; ++k) {
    const auto& f = fields[static_cast<std::size_t>(k)];
    std::size_t& dst = k == 0 ? nx : ny;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), dst);
    if (ec != std::errc() || ptr != f.data() + f.size()) throw FormatError("bad node count '" + f + "'");
  }
  const Rect dom{parse_real(fields[2], "header"), parse_real(fields[3], "header"), parse_real(fields[4], "header"),
                 parse_real(fields[5], "header")};
  GridSpec spec;
  try {
    spec = GridSpec(dom, nx, ny);
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("grid header: ") + e.what());
  }
  std::vector<double> values;
  values.reserve(spec.size());
  std::string line;
  for (std::size_t j = 0; j < ny; ++j) {
    if (!std::getline(is, line)) {
      throw FormatError("grid file ends after " + std::to_string(j) + " of " + std::to_string(ny) + " rows");
    }
    std::istringstream ls(line);
    std::size_t count = 0;
    const std::string where = "row " + std::to_string(j);
    while (ls >> tok) {
      values.push_back(parse_real(tok, where));
      ++count;
    }
    if (count != nx) {
      throw FormatError(where + " has " + std::to_string(count) + " values, expected " + std::to_string(nx));
    }
  }
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw FormatError("trailing data after grid rows");
  }
  return GridFunction(std::move(spec), std::move(values));
}

inline void save_grid(const std::string& path, const GridFunction& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open '" + path + "' for writing");
  write_grid(os, u);
  if (!os) throw FormatError("write to '" + path + "' failed");
}

inline GridFunction load_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open '" + path + "'");
  return read_grid(is);
}

// ---------------------------------------------------------------------------
// Report file

using Json = nlohmann::ordered_json;

struct ReportFile {
  std::string run_id;
  Json inputs = Json::object();
  std::vector<CheckReport> checks;

  [[nodiscard]] std::size_t passed() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.pass ? 1 : 0;
    return n;
  }
  [[nodiscard]] std::size_t failed() const { return checks.size() - passed(); }
};

/// Stable identifier of a run: FNV-1a of the serialized inputs, so identical command lines give identical reports.
inline std::string run_id_for(const Json& inputs) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : inputs.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline Json real_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double real_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace detail

inline Json report_to_json(const ReportFile& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"statement_ref", c.statement_ref},
                          {"worst_violation", detail::real_or_null(c.worst_violation)},
                          {"tolerance", detail::real_or_null(c.tolerance)},
                          {"pass", c.pass},
                          {"worst_location", Json::array({c.worst_location.i, c.worst_location.j})},
                          {"notes", c.notes}});
  }
  return Json{{"run_id", r.run_id},
              {"inputs", r.inputs},
              {"checks", std::move(checks)},
              {"summary", Json{{"passed", r.passed()}, {"failed", r.failed()}}}};
}

inline ReportFile report_from_json(const Json& j) {
  try {
    ReportFile r;
    r.run_id = j.at("run_id").get<std::string>();
    r.inputs = j.at("inputs");
    for (const auto& c : j.at("checks")) {
      CheckReport cr;
      cr.name = c.at("name").get<std::string>();
      cr.statement_ref = c.at("statement_ref").get<std::string>();
      cr.worst_violation = detail::real_from(c.at("worst_violation"));
      cr.tolerance = detail::real_from(c.at("tolerance"));
      cr.pass = c.at("pass").get<bool>();
      const auto& loc = c.at("worst_location");
      if (!loc.is_array() || loc.size() != 2) throw FormatError("worst_location must be [i, j]");
      cr.worst_location = {loc[0].get<std::size_t>(), loc[1].get<std::size_t>()};
      cr.notes = c.at("notes").get<std::string>();
      r.checks.push_back(std::move(cr));
    }
    const auto& summary = j.at("summary");
    if (summary.at("passed").get<std::size_t>() != r.passed() || summary.at("failed").get<std::size_t>() != r.failed()) {
      throw FormatError("report summary does not match the check list");
    }
    return r;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

inline void write_report(std::ostream& os, const ReportFile& r) { os << report_to_json(r).dump(2) << '\n'; }

inline ReportFile read_report(std::istream& is) {
  Json j;
  try {
    j = Json::parse(is);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("report is not JSON: ") + e.what());
  }
  return report_from_json(j);
}

// ---------------------------------------------------------------------------
// Bowl profile CSV

/// Rows (r, f, fp, f - r^2/2 + log r); the last column is empty (NaN in memory) for r < 1.
struct ProfileTable {
  std::vector<double> r, f, fp, gap;
};

inline ProfileTable profile_table(const BowlProfile& b, std::size_t stride = 1) {
  if (stride == 0) throw ArgumentError("profile stride must be positive");
  ProfileTable t;
  for (std::size_t k = 0; k < b.size(); k += stride) {
    t.r.push_back(b.r[k]);
    t.f.push_back(b.f[k]);
    t.fp.push_back(b.fp[k]);
    t.gap.push_back(b.r[k] < 1.0 ? std::numeric_limits<double>::quiet_NaN() : bowl_asymptote_deviation(b.r[k], b.f[k]));
  }
  return t;
}

inline void write_profile_csv(std::ostream& os, const ProfileTable& t) {
  os << "r,f,fp,asymptote_gap\n";
  std::string line;
  for (std::size_t k = 0; k < t.r.size(); ++k) {
    line = format_real(t.r[k]) + ',' + format_real(t.f[k]) + ',' + format_real(t.fp[k]) + ',';
    if (!std::isnan(t.gap[k])) line += format_real(t.gap[k]);
    line += '\n';
    os << line;
  }
}

inline ProfileTable read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "r,f,fp,asymptote_gap") throw FormatError("missing profile CSV header");
  ProfileTable t;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cols.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols.size() != 4) throw FormatError("profile row " + std::to_string(row) + " needs 4 columns");
    const std::string where = "profile row " + std::to_string(row);
    t.r.push_back(parse_real(cols[0], where));
    t.f.push_back(parse_real(cols[1], where));
    t.fp.push_back(parse_real(cols[2], where));
    t.gap.push_back(cols[3].empty() ? std::numeric_limits<double>::quiet_NaN() : parse_real(cols[3], where));
  }
  return t;
}

}  // namespace tlab
