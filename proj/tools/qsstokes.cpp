#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsstokes/analysis/spectrum.hpp"
#include "qsstokes/evolution/stepper.hpp"
#include "qsstokes/fields/flow.hpp"
#include "qsstokes/io/formats.hpp"
#include "qsstokes/io/init.hpp"
#include "qsstokes/verify.hpp"
#include "qsstokes/version.hpp"

namespace fs = std::filesystem;
using namespace qss;

namespace {

constexpr int exit_ok = 0, exit_usage = 1, exit_blowup = 2, exit_verify = 3;

struct PhysFlags {
  double mu = 1.0, sigma = 1.0, g = 0.0, rho_plus = 0.0, rho_minus = 0.0;
  CLI::Option *o_mu = nullptr, *o_sigma = nullptr, *o_g = nullptr, *o_rp = nullptr, *o_rm = nullptr;

  void add(CLI::App* app) {
    o_mu = app->add_option("--mu", mu, "viscosity (> 0)")->capture_default_str();
    o_sigma = app->add_option("--sigma", sigma, "surface tension (> 0)")->capture_default_str();
    o_g = app->add_option("--g", g, "gravity (>= 0)")->capture_default_str();
    o_rp = app->add_option("--rho-plus", rho_plus, "density above the interface")->capture_default_str();
    o_rm = app->add_option("--rho-minus", rho_minus, "density below the interface")->capture_default_str();
  }

  PhysParams params() const { return PhysParams(mu, sigma, g, rho_plus, rho_minus); }
};

io::json params_json(const PhysParams& p) {
  return {{"mu", p.mu()}, {"sigma", p.sigma()}, {"g", p.g()}, {"rho_plus", p.rho_plus()},
          {"rho_minus", p.rho_minus()}, {"theta", p.theta()}};
}

void warn_regime(const PhysParams& p) {
  if (regime_of(p) == Regime::unstable)
    std::cerr << "warning: sigma + Theta = " << p.sigma() + p.theta() << " < 0 (Theta = " << p.theta()
              << "): the flat interface is unstable and small perturbations grow\n";
}

// ---- simulate ----

struct SimulateFlags {
  int n = 128;
  PhysFlags phys;
  std::string init = "cos:1:0.01";
  std::string scheme = "rk4";
  double dt = 0.0, t_end = 1.0, tol = 1e-8, blowup = 1e3;
  long stride = 1;
  bool adapt = false;
  std::string out = "run";
  std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateFlags& fl) {
  const PhysParams prm = fl.phys.params();
  const PeriodicGrid grid(static_cast<std::size_t>(fl.n));
  const Profile f0 = io::build_init(fl.init, grid);
  StepperConfig cfg;
  cfg.scheme = parse_scheme(fl.scheme);
  cfg.dt = fl.dt;
  cfg.t_end = fl.t_end;
  cfg.snapshot_stride = fl.stride;
  cfg.adapt = fl.adapt;
  cfg.tol = fl.tol;
  cfg.blowup_factor = fl.blowup;
  if (cfg.dt < 0.0 || !(cfg.t_end >= 0.0) || cfg.snapshot_stride < 1 || !(cfg.tol > 0.0) || !(cfg.blowup_factor > 1.0))
    throw InvalidArgument("need dt >= 0, t-end >= 0, stride >= 1, tol > 0 and blowup-factor > 1");

  warn_regime(prm);

  const fs::path dir(fl.out);
  fs::create_directories(dir);
  std::ofstream snaps(dir / "snapshots.jsonl", std::ios::binary | std::ios::trunc);
  if (!snaps) throw io::IoError("cannot write to " + dir.string());

  io::json man;
  man["tool"] = "qsstokes";
  man["version"] = qss::version;
  man["command"] = "simulate";
  man["config"] = {{"n", fl.n},
                   {"params", params_json(prm)},
                   {"init", fl.init},
                   {"stepper",
                    {{"scheme", to_string(cfg.scheme)},
                     {"dt", cfg.dt > 0.0 ? cfg.dt : default_dt(cfg.scheme, grid.size())},
                     {"t_end", cfg.t_end},
                     {"stride", cfg.snapshot_stride},
                     {"adapt", cfg.adapt},
                     {"tol", cfg.tol},
                     {"blowup_factor", cfg.blowup_factor}}},
                   {"seed", fl.seed}};
  man["regime"] = to_string(regime_of(prm));
  man["snapshots"] = "snapshots.jsonl";

  long last_step = -1;
  double max_tail = 0.0;
  auto sink = [&](const Snapshot& s) {
    io::write_snapshot(snaps, s);
    last_step = s.step;
    max_tail = std::max(max_tail, s.tail());
  };
  int code = exit_ok;
  EvolutionState final_state(f0, prm);
  try {
    final_state = integrate(EvolutionState(f0, prm), cfg, sink);
    man["status"] = "completed";
  } catch (const BlowUpError& e) {
    const EvolutionState& g = e.last_good();
    if (g.step_count != last_step) sink(Snapshot{g.time, g.step_count, g.profile});
    final_state = g;
    man["status"] = "blow-up";
    man["error"] = e.what();
    std::cerr << "blow-up: " << e.what() << " (last good state at t = " << g.time << " persisted)\n";
    code = exit_blowup;
  }
  man["final_time"] = final_state.time;
  man["steps"] = final_state.step_count;
  // continuation diagnostics: reported, no criterion is enforced
  man["diagnostics"] = {{"linf", sup_norm(final_state.profile)},
                        {"l2", l2_norm(final_state.profile)},
                        {"spectral_tail", spectral_tail(final_state.profile)},
                        {"max_spectral_tail", max_tail}};
  snaps.close();
  std::ofstream(dir / "manifest.json", std::ios::binary | std::ios::trunc) << man.dump(2) << '\n';
  std::cout << "wrote " << (dir / "snapshots.jsonl").string() << " (t = " << final_state.time << ", "
            << final_state.step_count << " steps, spectral tail " << spectral_tail(final_state.profile) << ")\n";
  return code;
}

// ---- spectrum ----

struct SpectrumFlags {
  int n = 64, k_max = 0;
  double eps = 1e-6;
  PhysFlags phys;
  std::string out;
};

int cmd_spectrum(const SpectrumFlags& fl) {
  const PhysParams prm = fl.phys.params();
  const PeriodicGrid grid(static_cast<std::size_t>(fl.n));
  const int kmax = fl.k_max > 0 ? fl.k_max : std::min(fl.n / 4, 16);
  warn_regime(prm);
  const SpectrumReport rep = numeric_jacobian_at_zero(prm, grid, kmax, fl.eps);

  std::cout << std::setprecision(15) << "regime " << to_string(rep.regime) << "  sigma + Theta = "
            << prm.sigma() + prm.theta() << "  theta0 = ";
  if (rep.theta0) std::cout << *rep.theta0;
  else std::cout << "n/a";
  std::cout << "\n";
  std::printf("%4s %22s %22s %12s %12s\n", "k", "analytic", "numeric", "rel_error", "leakage");
  for (const auto& e : rep.modes)
    std::printf("%4d %22.15g %22.15g %12.3e %12.3e\n", e.k, e.analytic, e.numeric, e.rel_error, e.leakage);
  std::printf("constant-mode response %.3e\n", rep.constant_response);
  if (!fl.out.empty()) {
    std::ofstream os(fl.out, std::ios::binary | std::ios::trunc);
    if (!os) throw io::IoError("cannot write " + fl.out);
    io::write_spectrum_csv(os, rep);
  }
  return exit_ok;
}

// ---- field ----

struct FieldFlags {
  std::string snapshot;
  long index = -1;
  PhysFlags phys;
  double x1_min = 0.0, x1_max = two_pi, x2_min = -2.0, x2_max = 2.0;
  int nx = 32, ny = 32;
  int nodes = 0;
  double collar = -1.0;
  std::string out = "field.csv";
};

/// Parameters from the run manifest next to the snapshot file, overridden by explicit flags.
PhysParams field_params(const FieldFlags& fl) {
  PhysFlags p = fl.phys;
  const fs::path man = fs::path(fl.snapshot).parent_path() / "manifest.json";
  if (fs::exists(man)) {
    std::ifstream in(man);
    const auto j = io::json::parse(in).at("config").at("params");
    if (!p.o_mu->count()) p.mu = j.at("mu").get<double>();
    if (!p.o_sigma->count()) p.sigma = j.at("sigma").get<double>();
    if (!p.o_g->count()) p.g = j.at("g").get<double>();
    if (!p.o_rp->count()) p.rho_plus = j.at("rho_plus").get<double>();
    if (!p.o_rm->count()) p.rho_minus = j.at("rho_minus").get<double>();
  }
  return p.params();
}

int cmd_field(const FieldFlags& fl) {
  const auto recs = io::read_snapshots(fl.snapshot);
  if (recs.empty()) throw io::IoError(fl.snapshot + " holds no snapshots");
  const long idx = fl.index < 0 ? static_cast<long>(recs.size()) + fl.index : fl.index;
  if (idx < 0 || idx >= static_cast<long>(recs.size()))
    throw InvalidArgument("--index out of range (" + std::to_string(recs.size()) + " snapshots)");
  if (fl.nx < 1 || fl.ny < 1) throw InvalidArgument("--nx and --ny must be >= 1");
  const Profile f = recs[static_cast<std::size_t>(idx)].profile();
  const PhysParams prm = field_params(fl);

  FieldOptions opt;
  opt.nodes = static_cast<std::size_t>(std::max(fl.nodes, 0));
  opt.collar = fl.collar;
  const FlowField flow(f, prm, opt);

  std::ofstream os(fl.out, std::ios::binary | std::ios::trunc);
  if (!os) throw io::IoError("cannot write " + fl.out);
  os << io::field_header << '\n';
  io::FieldSidecar side;
  side.collar = flow.layer().options().collar;
  auto lin = [](double a, double b, int n, int i) { return n == 1 ? a : a + (b - a) * i / (n - 1); };
  for (int j = 0; j < fl.ny; ++j)
    for (int i = 0; i < fl.nx; ++i) {
      const Vec2 x{lin(fl.x1_min, fl.x1_max, fl.nx, i), lin(fl.x2_min, fl.x2_max, fl.ny, j)};
      if (flow.layer().proximity(x).distance < side.collar) {
        ++side.skipped_in_collar;
        continue;
      }
      io::write_field_row(os, flow.sample(x));
      ++side.written;
    }
  side.far_field = far_field_check(flow);
  const fs::path sc = fs::path(fl.out).replace_extension(".json");
  std::ofstream(sc, std::ios::binary | std::ios::trunc) << io::to_json(side).dump(2) << '\n';
  std::cout << "wrote " << side.written << " samples to " << fl.out << " (" << side.skipped_in_collar
            << " inside the collar skipped), sidecar " << sc.string() << "\n";
  return exit_ok;
}

// ---- verify ----

struct VerifyFlags {
  std::string level = "full";
  std::uint64_t seed = 1;
  double fault = 0.0;
};

int cmd_verify(const VerifyFlags& fl) {
  verify::Options o;
  o.level = verify::parse_level(fl.level);
  o.seed = fl.seed;
  o.fault = fl.fault;
  int failed = 0;
  std::string failing;
  const auto res = verify::run_suite(o, [&](const verify::CheckResult& r) {
    std::cout << verify::format_result(r) << std::endl;
    if (!r.passed) {
      ++failed;
      failing += (failing.empty() ? "" : ", ") + r.name;
    }
  });
  if (failed == 0) {
    std::cout << "all " << res.size() << " checks passed\n";
    return exit_ok;
  }
  std::ostringstream repro;
  repro << "qsstokes verify --level " << fl.level << " --seed " << fl.seed;
  if (fl.fault != 0.0) repro << " --inject-fault " << fl.fault;
  std::cout << failed << " of " << res.size() << " checks failed: " << failing << "\nreproduce: " << repro.str()
            << "\n";
  return exit_verify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasistationary two-phase Stokes interface flow: simulation, spectra, bulk fields, verification"};
  app.set_version_flag("--version", std::string(qss::version));
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* s = app.add_subcommand("simulate", "evolve an interface profile and write snapshots");
  s->add_option("--n", sim.n, "grid size (even, >= 8)")->capture_default_str();
  sim.phys.add(s);
  s->add_option("--init", sim.init, "initial profile: comma-separated cos:k:amp, sin:k:amp, const:c")
      ->capture_default_str();
  s->add_option("--scheme", sim.scheme, "rk4 or imex-euler")->capture_default_str();
  s->add_option("--dt", sim.dt, "time step (0 picks a default for the scheme)")->capture_default_str();
  s->add_option("--t-end", sim.t_end, "final time")->capture_default_str();
  s->add_option("--stride", sim.stride, "write every stride-th step")->capture_default_str();
  s->add_flag("--adapt", sim.adapt, "step-doubling error control");
  s->add_option("--tol", sim.tol, "tolerance for --adapt")->capture_default_str();
  s->add_option("--blowup-factor", sim.blowup, "abort when sup|f| exceeds this multiple of sup|f0|")
      ->capture_default_str();
  s->add_option("--out", sim.out, "output directory")->capture_default_str();
  s->add_option("--seed", sim.seed, "recorded in the manifest")->capture_default_str();

  SpectrumFlags sp;
  auto* p = app.add_subcommand("spectrum", "linearized spectrum at the flat interface, analytic vs numeric");
  p->add_option("--n", sp.n, "grid size")->capture_default_str();
  p->add_option("--k-max", sp.k_max, "largest wavenumber (<= N/4; 0 picks min(N/4, 16))")->capture_default_str();
  p->add_option("--eps", sp.eps, "finite-difference step")->capture_default_str();
  sp.phys.add(p);
  p->add_option("--out", sp.out, "CSV output path");

  FieldFlags fd;
  auto* f = app.add_subcommand("field", "sample velocity and pressure from a snapshot");
  f->add_option("--snapshot", fd.snapshot, "snapshots.jsonl file")->required();
  f->add_option("--index", fd.index, "snapshot record (negative counts from the end)")->capture_default_str();
  fd.phys.add(f);
  f->add_option("--x1-min", fd.x1_min)->capture_default_str();
  f->add_option("--x1-max", fd.x1_max)->capture_default_str();
  f->add_option("--x2-min", fd.x2_min)->capture_default_str();
  f->add_option("--x2-max", fd.x2_max)->capture_default_str();
  f->add_option("--nx", fd.nx, "samples along x1")->capture_default_str();
  f->add_option("--ny", fd.ny, "samples along x2")->capture_default_str();
  f->add_option("--nodes", fd.nodes, "trapezoid nodes (0 -> max(N, 256))")->capture_default_str();
  f->add_option("--collar", fd.collar, "skip points closer than this to the interface (< 0 -> default)")
      ->capture_default_str();
  f->add_option("--out", fd.out, "CSV output path; the sidecar gets a .json extension")->capture_default_str();

  VerifyFlags vf;
  auto* v = app.add_subcommand("verify", "run the invariant suite");
  v->add_option("--level", vf.level, "quick or full")->capture_default_str();
  v->add_option("--seed", vf.seed, "seed for randomized checks")->capture_default_str();
  v->add_option("--inject-fault", vf.fault, "corrupt one quadrature weight of B by this relative amount")
      ->expected(0, 1)
      ->default_str("0.001")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*s) return cmd_simulate(sim);
    if (*p) return cmd_spectrum(sp);
    if (*f) return cmd_field(fd);
    if (*v) {
      if (v->count("--inject-fault") && vf.fault == 0.0) vf.fault = 1e-3;
      return cmd_verify(vf);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
