// Velocity and pressure around a wavy interface, with the far-field limits.
#include <cmath>
#include <cstdio>

#include "qsstokes/fields/flow.hpp"
#include "qsstokes/io/init.hpp"

using namespace qss;

int main() {
  const PeriodicGrid grid(64);
  const Profile f = io::build_init("cos:1:0.25,sin:3:0.05", grid);
  const PhysParams prm(1.0, 1.0, 9.81, 0.0, 0.2);
  const FlowField flow(f, prm);

  std::printf("%8s %8s %5s %13s %13s %13s\n", "x1", "x2", "side", "v1", "v2", "q");
  for (double x2 : {-1.5, -0.75, 0.75, 1.5})
    for (int i = 0; i < 8; ++i) {
      const double x1 = two_pi * i / 8;
      if (flow.layer().proximity({x1, x2}).distance < flow.layer().options().collar) continue;
      const auto s = flow.sample({x1, x2});
      std::printf("%8.4f %8.3f %5d %13.6e %13.6e %13.6e\n", x1, x2, static_cast<int>(s.side), s.v[0], s.v[1], s.q);
    }

  const FarFieldCheck ff = far_field_check(flow);
  std::printf("far field: c1 = %.6e, c2 = %.6e; deviations at |x2| = 20: v1 %.2e, v2 %.2e, q %.2e\n",
              ff.constants.c1_forcing, ff.constants.c2_forcing, ff.v1_residual, ff.v2_residual, ff.q_residual);

  const auto r = stokes_residual(flow, {1.0, 1.2});
  std::printf("Stokes residuals at (1, 1.2): momentum %.2e, div %.2e, Lap q %.2e\n", r.momentum, r.divergence,
              r.pressure_laplacian);
}
