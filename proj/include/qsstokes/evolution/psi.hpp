#pragma once

#include <cmath>

#include "qsstokes/core/params.hpp"
#include "qsstokes/core/spectral.hpp"
#include "qsstokes/ops/composite.hpp"

namespace qss {

/// phi = (1/omega - 1, f'/omega).
struct PhiPair {
  Profile phi1, phi2;
};

inline PhiPair phi_of(const Profile& f) {
  const Profile d = spectral_derivative(f);
  return {map(d, [](double x) { return 1.0 / std::hypot(1.0, x) - 1.0; }),
          map(d, [](double x) { return x / std::hypot(1.0, x); })};
}

/// dphi(f)[h] = (a1 h', a2 h') with a1 = -f'/omega^3, a2 = 1/omega^3.
inline PhiPair dphi_of(const Profile& f, const Profile& h) {
  require_same_grid(f, h, "dphi_of");
  const Profile d = spectral_derivative(f), dh = spectral_derivative(h);
  const Profile a1 = map(d, [](double x) { const double w = std::hypot(1.0, x); return -x / (w * w * w); });
  const Profile a2 = map(d, [](double x) { const double w = std::hypot(1.0, x); return 1.0 / (w * w * w); });
  return {a1 * dh, a2 * dh};
}

/// Interface forcing G = Theta (-f f', f) - sigma (phi1', phi2').
struct Forcing {
  Profile g1, g2;
};

inline Forcing forcing_G(const Profile& f, const PhysParams& prm) {
  const double th = prm.theta(), sg = prm.sigma();
  const Profile d = spectral_derivative(f);
  const PhiPair ph = phi_of(f);
  const Profile p1 = spectral_derivative(ph.phi1), p2 = spectral_derivative(ph.phi2);
  std::vector<double> g1(f.size()), g2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    g1[i] = -th * f[i] * d[i] - sg * p1[i];
    g2[i] = th * f[i] - sg * p2[i];
  }
  return {Profile(f.grid(), std::move(g1)), Profile(f.grid(), std::move(g2))};
}

/// Far-field constants (v, q) -> (+-c1, 0, +-c2) as x2 -> +-infinity, by two routes.
struct FarField {
  double c1, c2;                    // -(sigma/2mu)<f'/omega>, -(Theta/2)<f>
  double c1_forcing, c2_forcing;    // -<f G1>/2mu, -<G2>/2
};

inline FarField far_field_constants(const Profile& f, const PhysParams& prm) {
  const Profile d = spectral_derivative(f);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += d[i] / std::hypot(1.0, d[i]);
  s /= static_cast<double>(f.size());
  const Forcing g = forcing_G(f, prm);
  FarField ff;
  ff.c1 = -prm.sigma() / (2.0 * prm.mu()) * s;
  ff.c2 = -prm.theta() / 2.0 * f.mean();
  ff.c1_forcing = -mean_product(f, g.g1) / (2.0 * prm.mu());
  ff.c2_forcing = -g.g2.mean() / 2.0;
  return ff;
}

/// The four blocks of the evolution operator.
struct PsiParts {
  Profile psi1, psi2, psi3, psi4;
};

inline PsiParts eval_Psi_parts(const Profile& f, const DiagonalKernels& k) {
  const Profile d = spectral_derivative(f);
  const PhiPair ph = phi_of(f);
  const Profile& p1 = ph.phi1;
  const Profile& p2 = ph.phi2;
  const Profile dp1 = d * p1, dp2 = d * p2;
  const Profile u = p1 - dp2;   // phi1 - f' phi2
  const Profile w = dp1 + p2;   // f' phi1 + phi2

  const Profile psi1 = k.apply(1, u) - 2.0 * k.apply(4, u) + 2.0 * k.apply(2, dp1) + k.apply(3, dp1 + p2);
  const Profile psi2 = k.apply(1, p2 - dp1) + k.apply(3, u) + 2.0 * k.apply(4, w);
  const Profile ffp = f * d;
  const Profile b5f = k.apply(5, f), b5ffp = k.apply(5, ffp);
  const Profile b6f = k.apply(6, f), b6ffp = k.apply(6, ffp);
  const Profile psi3 = k.apply(0, ffp) + b6ffp + b5f;
  const Profile psi4 = k.apply(0, f) - b6f + b5ffp;
  return {psi1, psi2, psi3, psi4};
}

/// Psi(f) = (sigma f' Psi1 + Theta f' Psi3 - sigma Psi2 + Theta Psi4)/(4 mu) + Theta ln4 <f>/(4 mu).
inline Profile eval_Psi(const Profile& f, const PhysParams& prm, const DiagonalKernels& k) {
  const PsiParts parts = eval_Psi_parts(f, k);
  const Profile d = spectral_derivative(f);
  const double sg = prm.sigma(), th = prm.theta(), mu4 = 4.0 * prm.mu();
  const double shift = th * std::log(4.0) * f.mean() / mu4;
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = (sg * d[i] * parts.psi1[i] + th * d[i] * parts.psi3[i] - sg * parts.psi2[i] + th * parts.psi4[i]) / mu4 +
             shift;
  return Profile(f.grid(), std::move(out));
}

inline Profile eval_Psi(const Profile& f, const PhysParams& prm) {
  return eval_Psi(f, prm, DiagonalKernels(f));
}

}  // namespace qss
