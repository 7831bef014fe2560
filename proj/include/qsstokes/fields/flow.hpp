#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qsstokes/evolution/psi.hpp"
#include "qsstokes/fields/layer.hpp"

namespace qss {

struct FieldSample {
  Vec2 x;
  Side side;
  Vec2 v;
  double q;
};

/// Velocity and pressure of the two-phase Stokes flow driven by the interface forcing G(f).
class FlowField {
 public:
  FlowField(const Profile& f, const PhysParams& prm, FieldOptions opt = {})
      : f_(f), prm_(prm), g_(forcing_G(f, prm)), layer_(f, {g_.g1, g_.g2}, opt) {
    if (std::abs(g_.g1.mean()) > 1e-10 * std::max(1.0, sup_norm(g_.g1)))
      throw DomainError("FlowField: <G1> must vanish");
    offset_ = g_.g2.mean() * std::log(4.0) / (4.0 * prm.mu());
  }

  const Profile& profile() const noexcept { return f_; }
  const PhysParams& params() const noexcept { return prm_; }
  const Forcing& forcing() const noexcept { return g_; }
  const LayerPotentials& layer() const noexcept { return layer_; }

  /// v = v_G + (0, <G2> ln4/(4 mu)).
  Vec2 velocity(Vec2 x) const { return velocity_from(layer_.eval(x)); }

  /// q = -(Z1[G1] + Z2[G2])/2.
  double pressure(Vec2 x) const { return pressure_from(layer_.eval(x)); }

  FieldSample sample(Vec2 x) const {
    const auto z = layer_.eval(x);
    return {x, layer_.side(x), velocity_from(z), pressure_from(z)};
  }

  /// grad v [i][j] = d v_i / d x_j.
  Mat2 velocity_gradient(Vec2 x) const { return gradient_from(layer_.eval(x)); }

  /// v and q straight from the periodic Stokeslet, v_G = (1/mu) int U G ds (trapezoid).
  FieldSample sample_by_stokeslet(Vec2 x) const {
    const std::size_t m = layer_.options().nodes;
    const Profile fm = upsample(f_, m), g1 = upsample(g_.g1, m), g2 = upsample(g_.g2, m);
    const double h = two_pi / static_cast<double>(m);
    Vec2 v{0.0, 0.0};
    double q = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto st = stokeslet_eval({x[0] - h * static_cast<double>(j), x[1] - fm[j]});
      for (int i = 0; i < 2; ++i) v[i] += h * (st.U[i][0] * g1[j] + st.U[i][1] * g2[j]) / prm_.mu();
      q += h * (st.P[0] * g1[j] + st.P[1] * g2[j]);
    }
    v[1] += offset_;
    return {x, layer_.side(x), v, q};
  }

  Vec2 velocity_from(const std::vector<KernelSet>& z) const {
    const auto& a = z[0];  // on G1
    const auto& b = z[1];  // on G2
    const double c = 1.0 / (4.0 * prm_.mu());
    return {c * (a[0] + a[6] - b[5]), c * (b[0] - b[6] - a[5]) + offset_};
  }

  double pressure_from(const std::vector<KernelSet>& z) const { return -0.5 * (z[0][1] + z[1][2]); }

  Mat2 gradient_from(const std::vector<KernelSet>& z) const {
    const auto& a = z[0];
    const auto& b = z[1];
    const double c = 1.0 / (4.0 * prm_.mu());
    // grad Z0 = (Z1, Z2), grad Z5 = (-Z3, Z1 - 2Z4), grad Z6 = (-2Z4, Z2 + Z3)
    const double d11 = c * ((a[1] - 2 * a[4]) + b[3]);
    const double d12 = c * ((2 * a[2] + a[3]) - (b[1] - 2 * b[4]));
    const double d21 = c * ((b[1] + 2 * b[4]) + a[3]);
    const double d22 = c * (-b[3] - (a[1] - 2 * a[4]));
    return {Vec2{d11, d12}, Vec2{d21, d22}};
  }

 private:
  Profile f_;
  PhysParams prm_;
  Forcing g_;
  LayerPotentials layer_;
  double offset_ = 0.0;
};

inline Vec2 velocity_field(const Profile& f, const PhysParams& prm, Vec2 x, const FieldOptions& opt = {}) {
  return FlowField(f, prm, opt).velocity(x);
}

inline double pressure_field(const Profile& f, const PhysParams& prm, Vec2 x, const FieldOptions& opt = {}) {
  return FlowField(f, prm, opt).pressure(x);
}

/// Trace B_index(f)[density] of Z_index on the interface (B1..B6).
inline Profile trace_B(int index, const Profile& f, const Profile& density) {
  if (index < 1 || index > 6) throw InvalidArgument("trace_B: index must be in 1..6");
  return composite_B(index, f, density);
}

enum class TraceVariant { direct_g, parts_z };

struct VelocityTrace {
  Profile v1, v2;  // trace of v_G at the grid nodes
};

/// Trace of v_G on the interface. direct_g uses the continuous Z0, Z5, Z6 on G;
/// parts_z integrates by parts (G = F') and uses B1..B4 on F. The latter needs <f> = 0
/// when Theta != 0 and returns nullopt otherwise.
inline std::optional<VelocityTrace> trace_velocity(const Profile& f, const PhysParams& prm, TraceVariant variant) {
  const DiagonalKernels k(f);
  const double c = 1.0 / (4.0 * prm.mu());
  if (variant == TraceVariant::direct_g) {
    const Forcing g = forcing_G(f, prm);
    const Profile b5g1 = k.apply(5, g.g1), b5g2 = k.apply(5, g.g2);
    const Profile v1 = c * (k.apply(0, g.g1) + k.apply(6, g.g1) - b5g2);
    const Profile v2 = c * (k.apply(0, g.g2) - k.apply(6, g.g2) - b5g1);
    return VelocityTrace{v1, v2};
  }
  const double th = prm.theta(), sg = prm.sigma();
  if (th != 0.0 && std::abs(f.mean()) > 1e-12 * std::max(1.0, sup_norm(f))) return std::nullopt;
  const PhiPair ph = phi_of(f);
  const Profile d = spectral_derivative(f);
  const Profile F1 = -sg * ph.phi1 - (0.5 * th) * (f * f);
  const Profile F2 = -sg * ph.phi2 + th * mean_free_antiderivative(f);
  const Profile u = F1 - d * F2, w = d * F1 + F2;
  const Profile v1 = c * (k.apply(1, u) - 2.0 * k.apply(4, u) + 2.0 * k.apply(2, d * F1) + k.apply(3, d * F1 + F2));
  const Profile v2 = c * (k.apply(1, F2 - d * F1) + k.apply(3, u) + 2.0 * k.apply(4, w));
  return VelocityTrace{v1, v2};
}

/// Jump of Z1..Z4 across the interface: {Z_n}^+ - {Z_n}^- = 2 J_n phi with
/// J = (-f', 1, -2 f'^2/omega^2, (f' - f'^3)/(2 omega^2)) / omega^2.
inline std::array<double, 4> z_jump_factors(double fp) {
  const double w2 = 1.0 + fp * fp;
  return {-fp / w2, 1.0 / w2, -2.0 * fp * fp / (w2 * w2), (fp - fp * fp * fp) / (2.0 * w2 * w2)};
}

struct JumpCheckOptions {
  std::vector<double> eps_factors{1e-1, 1e-2, 1e-3, 1e-4};  // times 2 pi / N
  std::size_t sample_points = 8;                            // equispaced grid nodes
  std::optional<Profile> density;                           // test density for Z1..Z4 (default cos + sin 2x)
  double tol = 1e-12;
};

struct JumpReport {
  std::vector<double> eps;                      // absolute distances along the unit normal
  std::array<std::vector<double>, 4> z_residual;  // max |Z_n(x +- eps nu) - (B_n +- J_n phi)|
  std::vector<double> pressure_jump_residual;   // |[q] + omega^{-1} G.nu|
  std::vector<double> stress_residual;          // |mu [(grad v + grad v^T)] nu - omega^{-1} (G.tau) tau|
  std::vector<double> traction_residual;        // |[T] nu - omega^{-1} G|
  std::vector<double> velocity_jump;            // |[v]|
  std::array<double, 4> z_order{};              // observed order in eps from the last two residuals
};

/// One-sided limits near the interface, evaluated with the adaptive field quadrature.
inline JumpReport interface_jump_checks(const Profile& f, const PhysParams& prm, const JumpCheckOptions& jo = {}) {
  const PeriodicGrid& grid = f.grid();
  const Profile phi = jo.density ? *jo.density
                                 : Profile::from_function(grid, [](double x) { return std::cos(x) + 0.5 * std::sin(2 * x); });
  require_same_grid(f, phi, "interface_jump_checks");
  FieldOptions fo;
  fo.method = FieldQuadrature::adaptive;
  fo.tol = jo.tol;
  const FlowField flow(f, prm, fo);
  const LayerPotentials lp(f, {phi}, fo);
  const DiagonalKernels dk(f);
  std::array<Profile, 4> bn{dk.apply(1, phi), dk.apply(2, phi), dk.apply(3, phi), dk.apply(4, phi)};
  const Profile d = spectral_derivative(f);
  const Geometry geo = geometry_quantities(f);
  const Forcing& G = flow.forcing();

  JumpReport rep;
  const std::size_t stride = std::max<std::size_t>(1, grid.size() / std::max<std::size_t>(1, jo.sample_points));
  for (double ef : jo.eps_factors) {
    const double eps = ef * grid.spacing();
    rep.eps.push_back(eps);
    std::array<double, 4> zr{};
    double qr = 0, sr = 0, tr = 0, vj = 0;
    for (std::size_t i = 0; i < grid.size(); i += stride) {
      const double xi = grid.node(i), nu1 = geo.nu1[i], nu2 = geo.nu2[i], w = geo.omega[i];
      const auto J = z_jump_factors(d[i]);
      std::array<std::vector<KernelSet>, 2> fz;  // flow kernels on each side
      for (int sd = 0; sd < 2; ++sd) {
        const double sign = sd == 0 ? 1.0 : -1.0;
        const Vec2 x{xi + sign * eps * nu1, f[i] + sign * eps * nu2};
        const auto z = lp.eval(x)[0];
        for (int n = 0; n < 4; ++n)
          zr[n] = std::max(zr[n], std::abs(z[n + 1] - (bn[n][i] + sign * J[n] * phi[i])));
        fz[sd] = flow.layer().eval(x);
      }
      const double gnu = G.g1[i] * nu1 + G.g2[i] * nu2;
      const double gtau = G.g1[i] * geo.tau1[i] + G.g2[i] * geo.tau2[i];
      const double qp = flow.pressure_from(fz[0]), qm = flow.pressure_from(fz[1]);
      qr = std::max(qr, std::abs((qp - qm) + gnu / w));
      const Mat2 gp = flow.gradient_from(fz[0]), gm = flow.gradient_from(fz[1]);
      const Vec2 vp = flow.velocity_from(fz[0]), vm = flow.velocity_from(fz[1]);
      vj = std::max(vj, std::hypot(vp[0] - vm[0], vp[1] - vm[1]));
      Vec2 st{}, trac{};
      for (int a = 0; a < 2; ++a) {
        double s = 0.0;
        for (int b = 0; b < 2; ++b) {
          const double nb = b == 0 ? nu1 : nu2;
          s += prm.mu() * ((gp[a][b] + gp[b][a]) - (gm[a][b] + gm[b][a])) * nb;
        }
        const double na = a == 0 ? nu1 : nu2, ta = a == 0 ? geo.tau1[i] : geo.tau2[i];
        st[a] = s - gtau * ta / w;
        trac[a] = s - (qp - qm) * na - (a == 0 ? G.g1[i] : G.g2[i]) / w;
      }
      sr = std::max(sr, std::hypot(st[0], st[1]));
      tr = std::max(tr, std::hypot(trac[0], trac[1]));
    }
    for (int n = 0; n < 4; ++n) rep.z_residual[n].push_back(zr[n]);
    rep.pressure_jump_residual.push_back(qr);
    rep.stress_residual.push_back(sr);
    rep.traction_residual.push_back(tr);
    rep.velocity_jump.push_back(vj);
  }
  const std::size_t ne = rep.eps.size();
  for (int n = 0; n < 4; ++n) {
    rep.z_order[n] = std::numeric_limits<double>::quiet_NaN();
    if (ne >= 2 && rep.z_residual[n][ne - 1] > 0 && rep.z_residual[n][ne - 2] > 0)
      rep.z_order[n] = std::log(rep.z_residual[n][ne - 2] / rep.z_residual[n][ne - 1]) /
                       std::log(rep.eps[ne - 2] / rep.eps[ne - 1]);
  }
  return rep;
}

/// Deviation from the far-field limits at x2 = +height and -height, maximized over sample points in x1.
struct FarFieldCheck {
  FarField constants;
  double height = 0.0;
  double v1_residual = 0.0;  // |v1 -+ c1|
  double v2_residual = 0.0;  // |v2|
  double q_residual = 0.0;   // |q -+ c2|, c2 = -<G2>/2
};

inline FarFieldCheck far_field_check(const FlowField& flow, double height = 20.0, int samples = 8) {
  if (!(height > 0.0) || samples < 1) throw InvalidArgument("far_field_check: need height > 0 and samples >= 1");
  FarFieldCheck r;
  r.constants = far_field_constants(flow.profile(), flow.params());
  r.height = height;
  for (double sgn : {1.0, -1.0})
    for (int j = 0; j < samples; ++j) {
      const auto s = flow.sample({two_pi * (j + 0.5) / samples, sgn * height});
      r.v1_residual = std::max(r.v1_residual, std::abs(s.v[0] - sgn * r.constants.c1_forcing));
      r.v2_residual = std::max(r.v2_residual, std::abs(s.v[1]));
      r.q_residual = std::max(r.q_residual, std::abs(s.q - sgn * r.constants.c2_forcing));
    }
  return r;
}

/// Finite-difference residuals of the bulk equations at x: |mu Lap v - grad q|, |div v|, |Lap q|.
struct StokesResidual {
  double momentum = 0.0;
  double divergence = 0.0;
  double pressure_laplacian = 0.0;
};

inline StokesResidual stokes_residual(const FlowField& flow, Vec2 x, double h = 1e-3) {
  // fourth-order stencils on +-h, +-2h along each axis
  std::array<std::array<FieldSample, 5>, 2> st;
  for (int dir = 0; dir < 2; ++dir)
    for (int j = 0; j < 5; ++j) {
      Vec2 y = x;
      y[dir] += (j - 2) * h;
      st[dir][j] = flow.sample(y);
    }
  auto d1 = [&](int dir, auto get) {
    const auto& a = st[dir];
    return (get(a[0]) - 8.0 * get(a[1]) + 8.0 * get(a[3]) - get(a[4])) / (12.0 * h);
  };
  auto d2 = [&](int dir, auto get) {
    const auto& a = st[dir];
    return (-get(a[0]) + 16.0 * get(a[1]) - 30.0 * get(a[2]) + 16.0 * get(a[3]) - get(a[4])) / (12.0 * h * h);
  };
  auto v1 = [](const FieldSample& s) { return s.v[0]; };
  auto v2 = [](const FieldSample& s) { return s.v[1]; };
  auto q = [](const FieldSample& s) { return s.q; };
  const double mu = flow.params().mu();
  StokesResidual r;
  const double m1 = mu * (d2(0, v1) + d2(1, v1)) - d1(0, q);
  const double m2 = mu * (d2(0, v2) + d2(1, v2)) - d1(1, q);
  r.momentum = std::hypot(m1, m2);
  r.divergence = std::abs(d1(0, v1) + d1(1, v2));
  r.pressure_laplacian = std::abs(d2(0, q) + d2(1, q));
  return r;
}

}  // namespace qss
