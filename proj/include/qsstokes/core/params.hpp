#pragma once

#include <cmath>
#include <string>

#include "qsstokes/core/errors.hpp"

namespace qss {

/// Physical parameters. Theta is always derived from g and the densities.
class PhysParams {
 public:
  PhysParams(double mu, double sigma, double g, double rho_plus, double rho_minus)
      : mu_(mu), sigma_(sigma), g_(g), rho_plus_(rho_plus), rho_minus_(rho_minus) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("PhysParams: mu must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("PhysParams: sigma must be > 0");
    if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidArgument("PhysParams: g must be >= 0");
    if (!std::isfinite(rho_plus) || !std::isfinite(rho_minus))
      throw InvalidArgument("PhysParams: densities must be finite");
  }

  /// Convenience for tests and analysis: choose g, rho so that Theta comes out as requested.
  static PhysParams with_theta(double mu, double sigma, double theta) {
    // g = 1, rho- - rho+ = theta
    return theta >= 0 ? PhysParams(mu, sigma, 1.0, 0.0, theta) : PhysParams(mu, sigma, 1.0, -theta, 0.0);
  }

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }
  double g() const noexcept { return g_; }
  double rho_plus() const noexcept { return rho_plus_; }
  double rho_minus() const noexcept { return rho_minus_; }
  double theta() const noexcept { return g_ * (rho_minus_ - rho_plus_); }

 private:
  double mu_, sigma_, g_, rho_plus_, rho_minus_;
};

}  // namespace qss
