#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsstokes/analysis/spectrum.hpp"
#include "qsstokes/core/errors.hpp"
#include "qsstokes/evolution/stepper.hpp"
#include "qsstokes/fields/flow.hpp"

namespace qss::io {

using json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);  // no "-0"
  return buf;
}

inline double parse_field(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError("cannot parse " + what + " from '" + s + "'");
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// ---- snapshots: one JSON object per line ----

struct SnapshotRecord {
  double t = 0.0, mean = 0.0, linf = 0.0, l2 = 0.0;
  std::vector<double> values;

  Profile profile() const { return Profile(PeriodicGrid(values.size()), values); }
};

inline json to_json(const Snapshot& s) {
  json j;
  j["t"] = s.t;
  j["mean"] = s.mean();
  j["linf"] = s.linf();
  j["l2"] = s.l2();
  j["values"] = s.profile.values();
  return j;
}

inline void write_snapshot(std::ostream& os, const Snapshot& s) { os << to_json(s).dump() << '\n'; }

inline SnapshotRecord parse_snapshot(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
    SnapshotRecord r;
    r.t = j.at("t").get<double>();
    r.mean = j.at("mean").get<double>();
    r.linf = j.at("linf").get<double>();
    r.l2 = j.at("l2").get<double>();
    r.values = j.at("values").get<std::vector<double>>();
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("bad snapshot record: ") + e.what());
  }
}

inline std::vector<SnapshotRecord> read_snapshots(std::istream& is) {
  std::vector<SnapshotRecord> out;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) out.push_back(parse_snapshot(line));
  return out;
}

inline std::vector<SnapshotRecord> read_snapshots(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_snapshots(in);
}

// ---- spectrum table ----

inline const char* spectrum_header = "k,analytic,numeric,numeric_sin,rel_error,leakage";

inline void write_spectrum_csv(std::ostream& os, const SpectrumReport& r) {
  os << spectrum_header << '\n';
  for (const auto& e : r.modes)
    os << e.k << ',' << format_double(e.analytic) << ',' << format_double(e.numeric) << ','
       << format_double(e.numeric_sin) << ',' << format_double(e.rel_error) << ',' << format_double(e.leakage)
       << '\n';
}

inline std::vector<ModeEntry> read_spectrum_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != spectrum_header) throw IoError("spectrum csv: unexpected header");
  std::vector<ModeEntry> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 6) throw IoError("spectrum csv: expected 6 columns in '" + line + "'");
    ModeEntry e;
    e.k = static_cast<int>(parse_field(c[0], "k"));
    e.analytic = parse_field(c[1], "analytic");
    e.numeric = parse_field(c[2], "numeric");
    e.numeric_sin = parse_field(c[3], "numeric_sin");
    e.rel_error = parse_field(c[4], "rel_error");
    e.leakage = parse_field(c[5], "leakage");
    out.push_back(e);
  }
  return out;
}

// ---- field samples ----

inline const char* field_header = "x1,x2,side,v1,v2,q";

inline void write_field_row(std::ostream& os, const FieldSample& s) {
  os << format_double(s.x[0]) << ',' << format_double(s.x[1]) << ',' << static_cast<int>(s.side) << ','
     << format_double(s.v[0]) << ',' << format_double(s.v[1]) << ',' << format_double(s.q) << '\n';
}

inline void write_field_csv(std::ostream& os, const std::vector<FieldSample>& rows) {
  os << field_header << '\n';
  for (const auto& r : rows) write_field_row(os, r);
}

inline std::vector<FieldSample> read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != field_header) throw IoError("field csv: unexpected header");
  std::vector<FieldSample> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 6) throw IoError("field csv: expected 6 columns in '" + line + "'");
    const double sd = parse_field(c[2], "side");
    if (sd != 1.0 && sd != -1.0) throw IoError("field csv: side must be 1 or -1");
    out.push_back({{parse_field(c[0], "x1"), parse_field(c[1], "x2")},
                   sd > 0 ? Side::plus : Side::minus,
                   {parse_field(c[3], "v1"), parse_field(c[4], "v2")},
                   parse_field(c[5], "q")});
  }
  return out;
}

/// Sidecar written next to a field CSV.
struct FieldSidecar {
  FarFieldCheck far_field;
  long skipped_in_collar = 0;
  long written = 0;
  double collar = 0.0;
};

inline json to_json(const FieldSidecar& s) {
  json j;
  j["c1"] = s.far_field.constants.c1_forcing;
  j["c2"] = s.far_field.constants.c2_forcing;
  j["c1_from_slope"] = s.far_field.constants.c1;
  j["far_field"] = {{"height", s.far_field.height},
                    {"v1_residual", s.far_field.v1_residual},
                    {"v2_residual", s.far_field.v2_residual},
                    {"q_residual", s.far_field.q_residual}};
  j["collar"] = s.collar;
  j["skipped_in_collar"] = s.skipped_in_collar;
  j["written"] = s.written;
  return j;
}

}  // namespace qss::io
