#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "qsstokes/core/errors.hpp"
#include "qsstokes/core/profile.hpp"

namespace qss::io {

/// One term of an initial-profile spec.
struct InitTerm {
  enum Kind { cos, sin, constant } kind;
  int k = 0;
  double amp = 0.0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto p = s.find(sep);
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) return out;
    s.remove_prefix(p + 1);
  }
}

inline double parse_double(std::string_view s, std::string_view term) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
    throw InvalidArgument("init: bad number '" + std::string(s) + "' in '" + std::string(term) + "'");
  return v;
}

inline int parse_int(std::string_view s, std::string_view term) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw InvalidArgument("init: bad wavenumber '" + std::string(s) + "' in '" + std::string(term) + "'");
  return v;
}

}  // namespace detail

/// Parse "cos:k:amp,sin:k:amp,const:c" (any number of terms, summed).
inline std::vector<InitTerm> parse_init(std::string_view spec) {
  std::vector<InitTerm> terms;
  if (detail::trim(spec).empty()) throw InvalidArgument("init: empty spec");
  for (auto term : detail::split(spec, ',')) {
    const auto parts = detail::split(term, ':');
    if (parts[0] == "const") {
      if (parts.size() != 2) throw InvalidArgument("init: expected const:c, got '" + std::string(term) + "'");
      terms.push_back({InitTerm::constant, 0, detail::parse_double(parts[1], term)});
    } else if (parts[0] == "cos" || parts[0] == "sin") {
      if (parts.size() != 3)
        throw InvalidArgument("init: expected " + std::string(parts[0]) + ":k:amp, got '" + std::string(term) + "'");
      InitTerm t{parts[0] == "cos" ? InitTerm::cos : InitTerm::sin, detail::parse_int(parts[1], term),
                 detail::parse_double(parts[2], term)};
      if (t.k < 0 || (t.kind == InitTerm::sin && t.k == 0))
        throw InvalidArgument("init: wavenumber out of range in '" + std::string(term) + "'");
      terms.push_back(t);
    } else {
      throw InvalidArgument("init: unknown term '" + std::string(term) + "' (cos, sin or const)");
    }
  }
  return terms;
}

/// Sample the parsed terms on the grid. Wavenumbers must be resolved (k < N/2).
inline Profile build_init(const std::vector<InitTerm>& terms, const PeriodicGrid& grid) {
  for (const auto& t : terms)
    if (t.k >= static_cast<int>(grid.size() / 2))
      throw InvalidArgument("init: wavenumber " + std::to_string(t.k) + " not resolved on N = " +
                            std::to_string(grid.size()));
  return Profile::from_function(grid, [&](double x) {
    double v = 0.0;
    for (const auto& t : terms) {
      if (t.kind == InitTerm::constant) v += t.amp;
      else if (t.kind == InitTerm::cos) v += t.amp * std::cos(t.k * x);
      else v += t.amp * std::sin(t.k * x);
    }
    return v;
  });
}

inline Profile build_init(std::string_view spec, const PeriodicGrid& grid) { return build_init(parse_init(spec), grid); }

}  // namespace qss::io
