#include "hermion/verify.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hermion/trace_io.hpp"

namespace hermion {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

std::vector<HermiteField> standard_family(std::uint64_t seed, int count, int dim,
                                          int cutoff, double norm) {
  std::vector<HermiteField> family;
  family.reserve(count);
  GaussianRng rng(seed);
  for (int i = 0; i < count; ++i) {
    HermiteField f(dim, cutoff);
    for (cplx& c : f.coeffs) c = cplx(rng.normal(), rng.normal());
    const double n = f.l2_norm();
    for (cplx& c : f.coeffs) c *= norm / n;
    family.push_back(std::move(f));
  }
  return family;
}

double measured_trilinear_constant(const RunConfig& cfg, const KernelSpec& kernel) {
  NormContext ctx{cfg.lattice, cfg.box_grid(), 32};
  const auto family = standard_family(cfg.seed, 20, cfg.dim, 24);
  double worst = 0.0;
  for (const HermiteField& f : family)
    worst = std::max(worst, trilinear_ratio(f, 1.0, 1.0, kernel, ctx));
  return 2.0 * worst;
}

// ---------------------------------------------------------------------------
// Individual checks. Each is pure given the config; RNG seeds derive from
// config.seed ⊕ FNV(check id) so scheduling cannot influence results.
// ---------------------------------------------------------------------------

namespace {

using CheckFn = std::function<CheckResult(const RunConfig&)>;

struct CheckDef {
  std::string id;
  std::string claim;
  bool hard;
  CheckFn fn;
};

std::uint64_t check_seed(const RunConfig& cfg, const std::string& id) {
  return cfg.seed ^ fnv1a64(id);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// -- 1 ----------------------------------------------------------------------

double isometry_worst_error(const TFLattice& lat, const std::vector<HermiteField>& family) {
  ModeTableCache cache(lat, family.front().cutoff, /*wigner=*/false);
  const double times[3] = {0.3, 1.0, kPi / 2.0};
  const double ps[3] = {1.0, 2.0, 4.0};
  double worst = 0.0;
  for (const HermiteField& f : family) {
    const STFTTable base = stft_cached(f, cache);
    double n0[3];
    for (int ip = 0; ip < 3; ++ip) n0[ip] = mixed_norm_x_then_y(base, ps[ip], ps[ip]);
    for (double t : times) {
      const STFTTable evolved = stft_cached(evolve_linear(f, t), cache);
      for (int ip = 0; ip < 3; ++ip) {
        const double n1 = mixed_norm_x_then_y(evolved, ps[ip], ps[ip]);
        worst = std::max(worst, std::abs(n1 - n0[ip]) / n0[ip]);
      }
    }
  }
  return worst;
}

CheckResult check_mpp_isometry(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 1e-3;
  const auto family = standard_family(check_seed(cfg, "mpp-isometry"), 20, 1, 24);
  TFLattice lat = cfg.lattice;
  lat.dim = 1;
  const double worst = isometry_worst_error(lat, family);
  const double worst_refined = isometry_worst_error(lat.refined(0.5), family);
  const double shrink = worst_refined > 0 ? worst / worst_refined : 1e9;
  r.pass = worst <= r.tolerance && shrink >= 2.0;
  r.measured = worst;
  r.details = "worst rel change " + fmt(worst) + ", refined " + fmt(worst_refined) +
              " (shrink x" + fmt(shrink) + ", need >= 2)";
  return r;
}

// -- 2 ----------------------------------------------------------------------

CheckResult check_mpq_nonpreservation(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 1e-2;
  TFLattice lat = cfg.lattice;
  lat.dim = 1;
  HermiteField f(1, 8);
  f.coeffs[0] = 1.0;
  f.coeffs[1] = 1.0;
  auto scan = [&](const TFLattice& l) {
    ModeTableCache cache(l, f.cutoff, false);
    const double n0 = mixed_norm_x_then_y(stft_cached(f, cache), 1.0, 2.0);
    double best = 0.0;
    for (int i = 0; i < 32; ++i) {
      const double t = kPi * i / 31.0;
      const double n = mixed_norm_x_then_y(stft_cached(evolve_linear(f, t), cache), 1.0, 2.0);
      best = std::max(best, std::abs(n - n0) / n0);
    }
    return best;
  };
  double best = scan(lat);
  bool refined = false;
  if (best < r.tolerance) {  // one lattice refinement before the final verdict
    best = scan(lat.refined(0.5));
    refined = true;
  }
  r.pass = best >= r.tolerance;
  r.measured = best;
  r.details = "max rel M^{1,2} change over 32-point scan of [0,pi]: " + fmt(best) +
              (refined ? " (after refinement)" : "");
  return r;
}

// -- 3 ----------------------------------------------------------------------

CheckResult check_moyal(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 1e-6;
  const auto family = standard_family(check_seed(cfg, "moyal-l2"), 10, 1, 24);
  TFLattice lat = cfg.lattice;
  lat.dim = 1;
  ModeTableCache cache(lat, 24, false);
  double worst = 0.0;
  for (const HermiteField& f : family) {
    const double m22 = modulation_norm(f, 2.0, 2.0, cache);
    worst = std::max(worst, std::abs(m22 - f.l2_norm()) / f.l2_norm());
  }
  r.pass = worst <= r.tolerance;
  r.measured = worst;
  r.details = "worst rel |M^{2,2} - L^2| over 10 fields: " + fmt(worst);
  return r;
}

// -- 4 ----------------------------------------------------------------------

CheckResult check_wigner_identity(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 1e-8;
  TFLattice lat = cfg.lattice;
  lat.dim = 1;
  if (lat.x_step != lat.y_step || lat.x_extent != lat.y_extent)
    fail_usage("wigner-stft-identity needs a symmetric lattice");
  const int N = 8;
  std::vector<HermiteField> fields;
  {
    HermiteField a(1, N), b(1, N), c(1, N);
    a.coeffs[0] = 1.0;
    b.coeffs[1] = 1.0;
    c.coeffs[0] = 1.0;
    c.coeffs[2] = cplx(0.0, 1.0);
    fields = {a, b, c};
  }
  ModeTableCache vcache(lat, N, false), wcache(lat, N, true);
  const auto xs = lat.x_points();
  const auto ys = lat.y_points();
  const int nx = lat.x_count(), ny = lat.y_count();
  const double pref = std::pow(2.0 * kPi, -0.5);
  double worst = 0.0;
  for (const HermiteField& f : fields) {
    const STFTTable V = stft_cached(f, vcache);
    const STFTTable W = fourier_wigner_cached(f, wcache);
    for (int ix = 0; ix < nx; ++ix)
      for (int iy = 0; iy < ny; ++iy) {
        // (2π)^{−1/2}⟨π(x,y)f,g⟩ vs e^{−ixy/2} V_g f(y, −x)
        const cplx lhs = pref * W.at(ix, iy);
        const cplx rhs =
            std::polar(1.0, -0.5 * xs[ix] * ys[iy]) * V.at(iy, nx - 1 - ix);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  r.pass = worst <= r.tolerance;
  r.measured = worst;
  r.details = "max abs deviation across 3 fields: " + fmt(worst);
  return r;
}

// -- 5 ----------------------------------------------------------------------

CheckResult check_special_hermite(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 1e-6;
  TFLattice lat = cfg.lattice;
  lat.dim = 1;
  const auto xs = lat.x_points();
  const auto ys = lat.y_points();
  const int A = 5;  // |α| ≤ 4
  // Gram of the closed forms under lattice quadrature over C
  double gram_err = 0.0;
  std::vector<std::vector<cplx>> samples(A);
  for (int a = 0; a < A; ++a) {
    samples[a].resize(xs.size() * ys.size());
    const int alpha[1] = {a};
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
      for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        const cplx z(xs[ix], ys[iy]);
        samples[a][ix * ys.size() + iy] = special_hermite(alpha, std::span(&z, 1));
      }
  }
  const double cell = lat.x_step * lat.y_step;
  for (int a = 0; a < A; ++a)
    for (int b = 0; b < A; ++b) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < samples[a].size(); ++i)
        acc += samples[a][i] * std::conj(samples[b][i]);
      acc *= cell;
      gram_err = std::max(gram_err, std::abs(acc - (a == b ? 1.0 : 0.0)));
    }
  // Transform route matches the closed form: F_α(x,y) = (2π)^{1/2} Φ_{α,0}(x+iy)
  ModeTableCache wcache(lat, A, true);
  const double scale = std::pow(2.0 * kPi, 0.5);
  double match_err = 0.0;
  for (int a = 0; a < A; ++a) {
    HermiteField f(1, A);
    f.coeffs[a] = 1.0;
    const STFTTable W = fourier_wigner_cached(f, wcache);
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
      for (std::size_t iy = 0; iy < ys.size(); ++iy)
        match_err = std::max(match_err,
                             std::abs(W.at(int(ix), int(iy)) -
                                      scale * samples[a][ix * ys.size() + iy]));
  }
  r.pass = gram_err <= 1e-6 && match_err <= 1e-8;
  r.measured = std::max(gram_err, match_err);
  r.details = "gram max-entry error " + fmt(gram_err) + " (tol 1e-6), closed-form match " +
              fmt(match_err) + " (tol 1e-8)";
  return r;
}

// -- 6 ----------------------------------------------------------------------

CheckResult check_mass_conservation(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 1e-9;
  SolverConfig sc;
  sc.horizon = 5.0;
  sc.dt = 1e-3;
  sc.scheme = Scheme::strang;
  sc.snapshot_dt = 0.5;
  sc.conservation_tol = 1e-6;
  RunConfig c1 = cfg;
  c1.dim = 1;
  c1.cutoff = 48;
  c1.quad_points = 96;
  EvolveContext ctx = c1.evolve_context(/*with_lattice=*/false);
  HermiteField u0(1, 48);
  u0.coeffs[0] = 1.0;

  sc.nonlin = PowerNonlin{1, -1.0};
  const EvolutionTrace cubic = evolve_nonlinear(u0, sc, ctx);
  sc.nonlin = HartreeNonlin{HartreeKernel{1.0, 0.4}, 1};
  const EvolutionTrace hartree = evolve_nonlinear(u0, sc, ctx);

  auto drift = [](const EvolutionTrace& tr) {
    const double l0 = tr.snaps.front().l2;
    double worst = 0.0;
    for (const Snapshot& s : tr.snaps) worst = std::max(worst, std::abs(s.l2 - l0) / l0);
    return worst;
  };
  const double dc = drift(cubic), dh = drift(hartree);
  r.measured = std::max(dc, dh);
  r.pass = r.measured <= r.tolerance;
  r.details = "rel L2 drift over T=5, dt=1e-3: cubic " + fmt(dc) + ", hartree " + fmt(dh);
  return r;
}

// -- 7 ----------------------------------------------------------------------

CheckResult check_linear_revival(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 1e-12;
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const int N = d == 1 ? 32 : 12;
    const auto family = standard_family(check_seed(cfg, "linear-revival") + d, 3, d, N);
    for (const HermiteField& f : family) {
      const HermiteField g = evolve_linear(f, kPi);
      const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
      double err = 0.0;
      for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        err = std::max(err, std::abs(g.coeffs[i] - sgn * f.coeffs[i]));
      worst = std::max(worst, err / f.l2_norm());
    }
  }
  r.pass = worst <= r.tolerance;
  r.measured = worst;
  r.details = "max coefficient distance to (-1)^d f after t=pi (d=1,2): " + fmt(worst);
  return r;
}

// -- 8 ----------------------------------------------------------------------

CheckResult check_strang_order(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 0.2;  // |order − 2| ≤ 0.2
  RunConfig c1 = cfg;
  c1.dim = 1;
  c1.cutoff = 48;
  c1.quad_points = 96;
  EvolveContext ctx = c1.evolve_context(false);
  HermiteField u0(1, 48);
  u0.coeffs[0] = std::sqrt(0.8);
  u0.coeffs[1] = std::sqrt(0.2);

  auto final_state = [&](double dt) {
    SolverConfig sc;
    sc.horizon = 0.5;
    sc.dt = dt;
    sc.scheme = Scheme::strang;
    sc.snapshot_dt = 0.5;
    sc.nonlin = PowerNonlin{1, -1.0};
    return evolve_nonlinear(u0, sc, ctx).snaps.back().field;
  };
  const HermiteField u1 = final_state(4e-3);
  const HermiteField u2 = final_state(2e-3);
  const HermiteField u3 = final_state(1e-3);
  const double e1 = l2_distance(u1, u2);
  const double e2 = l2_distance(u2, u3);
  const double order = std::log2(e1 / e2);
  r.measured = order;
  r.pass = order >= 1.8 && order <= 2.2;
  r.details = "observed order " + fmt(order) + " from errors " + fmt(e1) + ", " + fmt(e2);
  return r;
}

// -- 9 ----------------------------------------------------------------------

CheckResult check_picard_contraction(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 0.95;
  RunConfig c1 = cfg;
  c1.dim = 1;
  c1.cutoff = 32;
  c1.quad_points = 64;
  const KernelSpec kernel = HartreeKernel{1.0, 0.4};
  const double c_measured = measured_trilinear_constant(c1, kernel);

  TFLattice lat = c1.lattice;
  lat.dim = 1;
  ModeTableCache cache(lat, 24, false);
  const auto family = standard_family(check_seed(cfg, "picard-contraction"), 20, 1, 24);

  EvolveContext ctx = c1.evolve_context(false);
  int contracted = 0;
  double worst_gap = 0.0;
  int agree_checked = 0;
  for (const HermiteField& f0 : family) {
    const double M = 2.0 * modulation_norm(f0, 1.0, 1.0, cache);
    const double T = local_existence_time(M, c_measured, /*cap=*/1.0);
    // embed the cutoff-24 datum into the working cutoff
    HermiteField u0(1, c1.cutoff);
    std::copy(f0.coeffs.begin(), f0.coeffs.end(), u0.coeffs.begin());
    SolverConfig sc;
    sc.horizon = T;
    sc.dt = std::min(1e-3, T / 8.0);
    sc.nonlin = HartreeNonlin{HartreeKernel{1.0, 0.4}, 1};
    sc.picard_iters = 16;
    try {
      const PicardResult pr = picard_solve(u0, sc, ctx);
      const bool ok = !pr.ratios.empty() &&
                      *std::max_element(pr.ratios.begin(), pr.ratios.end()) < 1.0;
      if (ok) ++contracted;
      if (agree_checked < 20) {
        sc.scheme = Scheme::strang;
        sc.snapshot_dt = T;
        const EvolutionTrace tr = evolve_nonlinear(u0, sc, ctx);
        worst_gap = std::max(worst_gap, l2_distance(pr.at_horizon, tr.snaps.back().field));
        ++agree_checked;
      }
    } catch (const Error&) {
      // non-contraction counts against the 95% quota
    }
  }
  const double frac = contracted / 20.0;
  r.measured = frac;
  r.pass = frac >= 0.95 && worst_gap <= 1e-4;
  r.details = "contracted " + std::to_string(contracted) + "/20 at T=1/(2cM^2), c=" +
              fmt(c_measured) + "; worst picard-strang l2 gap " + fmt(worst_gap) +
              " (tol 1e-4)";
  return r;
}

// -- 10 ---------------------------------------------------------------------

// Mollified-kernel oracle: unitary radial Fourier transform of |x|^{−γ}e^{−εx²}
// with geometrically graded panels near 0 and Richardson extrapolation in ε.
double mollified_kernel_ft(int d, double gamma, double xi, double eps) {
  const double R = std::sqrt(45.0 / eps);
  static const double gl_x[12] = {
      -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
      -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
      0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
      0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
  static const double gl_w[12] = {
      0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
      0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
      0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
      0.1600783285433462, 0.1069393259953184, 0.0471753363865118};
  std::vector<double> edges{0.0};
  for (double e = 1e-10; e < std::min(1.0, R); e *= 2.0) edges.push_back(e);
  const double step = (2.0 * kPi / std::max(xi, 1e-3)) / 6.0;
  for (double e = edges.back(); e < R;) {
    e = std::min(e + step, R);
    edges.push_back(e);
  }
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    for (int i = 0; i < 12; ++i) {
      const double t = mid + half * gl_x[i];
      const double w = half * gl_w[i];
      const double f = std::pow(t, -gamma) * std::exp(-eps * t * t);
      if (d == 1)
        acc += w * 2.0 * f * std::cos(t * xi) / std::sqrt(2.0 * kPi);
      else if (d == 2)
        acc += w * f * std::cyl_bessel_j(0.0, t * xi) * t;
      else
        acc += w * std::sqrt(2.0 / kPi) / xi * f * std::sin(t * xi) * t;
    }
  }
  return acc;
}

CheckResult check_hartree_kernel(const RunConfig&) {
  CheckResult r;
  r.tolerance = 1e-3;
  const std::pair<int, double> cases[3] = {{1, 0.4}, {2, 0.5}, {3, 1.0}};
  double worst = 0.0, worst_hom = 0.0;
  std::string det;
  for (const auto& [d, gamma] : cases) {
    const HartreeKernel hk{1.0, gamma};
    for (double xi : {0.5, 1.0, 2.0}) {
      const double v1 = mollified_kernel_ft(d, gamma, xi, 1e-3);
      const double v2 = mollified_kernel_ft(d, gamma, xi, 2.5e-4);
      const double oracle = (4.0 * v2 - v1) / 3.0;
      std::vector<double> xiv(d, 0.0);
      xiv[0] = xi;
      const double impl = hartree_kernel_fourier(hk, xiv, d);
      worst = std::max(worst, std::abs(impl - oracle) / std::abs(oracle));
      // exact homogeneity: K̂(2ξ) = 2^{−(d−γ)} K̂(ξ)
      std::vector<double> xiv2(d, 0.0);
      xiv2[0] = 2.0 * xi;
      const double hom = std::abs(hartree_kernel_fourier(hk, xiv2, d) -
                                  std::pow(2.0, -(d - gamma)) * impl) /
                         impl;
      worst_hom = std::max(worst_hom, hom);
    }
    det += (det.empty() ? "" : ", ") + std::string("d=") + std::to_string(d);
  }
  r.measured = worst;
  r.pass = worst <= 1e-3 && worst_hom <= 1e-12;
  r.details = "worst rel deviation from mollified-kernel oracle " + fmt(worst) +
              "; homogeneity residual " + fmt(worst_hom) + " (tol 1e-12)";
  return r;
}

// -- 11 ---------------------------------------------------------------------

CheckResult check_hls(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 0.01;
  const TensorGrid box{1, uniform_box_rule(cfg.box_points, cfg.box_half_width)};
  std::vector<double> ratios;
  for (double lam : {0.5, 1.0, 2.0}) {
    GridField f;
    f.grid = box;
    f.values.resize(box.size());
    for (int i = 0; i < box.axis.size(); ++i) {
      const double x = box.axis.nodes[i];
      f.values[i] = std::exp(-0.5 * lam * lam * x * x);
    }
    ratios.push_back(hls_ratio(f, 0.5, 4.0 / 3.0));
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  const double spread = (hi - lo) / (0.5 * (hi + lo));
  r.measured = spread;
  r.pass = spread <= r.tolerance && std::isfinite(hi);
  r.details = "ratios " + fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " + fmt(ratios[2]) +
              "; dilation spread " + fmt(spread);
  return r;
}

// -- 12 ---------------------------------------------------------------------

CheckResult check_trilinear_stability(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 0.10;
  RunConfig c1 = cfg;
  c1.dim = 1;
  NormContext ctx{c1.lattice, c1.box_grid(), 32};
  ctx.lattice.dim = 1;
  const KernelSpec kernel = HartreeKernel{1.0, 0.4};

  const std::uint64_t seed_a = check_seed(cfg, "trilinear-stability");
  const std::uint64_t seed_b = seed_a ^ 0x517cc1b727220a95ULL;
  auto sup_over = [&](std::uint64_t seed) {
    double sup = 0.0;
    for (const HermiteField& f : standard_family(seed, 20, 1, 24))
      sup = std::max(sup, trilinear_ratio(f, 1.0, 1.0, kernel, ctx));
    return sup;
  };
  const double sup_a = sup_over(seed_a);
  const double sup_b = sup_over(seed_b);
  const double seed_gap = std::abs(sup_a - sup_b) / sup_a;

  // exact scale invariance under f → 3f
  const HermiteField f = standard_family(seed_a, 1, 1, 24).front();
  const double r1 = trilinear_ratio(f, 1.0, 1.0, kernel, ctx);
  const double r3 = trilinear_ratio(cplx(3.0, 0.0) * f, 1.0, 1.0, kernel, ctx);
  const double scale_dev = std::abs(r3 - r1) / r1;

  r.measured = seed_gap;
  r.pass = std::isfinite(sup_a) && seed_gap <= 0.10 && scale_dev <= 1e-10;
  r.details = "sup ratio " + fmt(sup_a) + " vs " + fmt(sup_b) + " across seeds (gap " +
              fmt(seed_gap) + "); scale-invariance deviation " + fmt(scale_dev) +
              " (tol 1e-10)";
  return r;
}

// -- 13 ---------------------------------------------------------------------

CheckResult check_admissible_pair(const RunConfig&) {
  CheckResult r;
  r.tolerance = 0.0;
  bool ok = true;
  for (const Rational gamma : {Rational(3, 10), Rational(7, 10)})
    for (int d = 1; d <= 3; ++d) ok = ok && strichartz_pair_exact(gamma, d);
  // spot values of the floating-point route
  ok = ok && std::isinf(admissible_pair(2.0, 1));
  ok = ok && std::abs(admissible_pair(8.0 / 3.0, 1) - 16.0) < 1e-12;
  r.pass = ok;
  r.measured = ok ? 0.0 : 1.0;
  r.details = "exact rational identity for gamma in {3/10, 7/10}, d in {1,2,3}";
  return r;
}

// -- 14 ---------------------------------------------------------------------

CheckResult check_determinism(const RunConfig& cfg) {
  CheckResult r;
  r.tolerance = 0.0;
  RunConfig c1 = cfg;
  c1.dim = 1;
  c1.cutoff = 40;
  c1.quad_points = 80;
  auto run_once = [&]() {
    SolverConfig sc;
    sc.horizon = 0.2;
    sc.dt = 1e-2;
    sc.snapshot_dt = 0.05;
    sc.conservation_tol = 1e-3;  // determinism is under test here, not drift
    sc.nonlin = HartreeNonlin{HartreeKernel{1.0, 0.4}, 1};
    sc.monitor_ps = {1.0, 2.0};
    EvolveContext ctx = c1.evolve_context(true);
    const auto fam = standard_family(check_seed(cfg, "determinism"), 1, 1, 24);
    HermiteField u0(1, c1.cutoff);  // embed into the working cutoff
    std::copy(fam.front().coeffs.begin(), fam.front().coeffs.end(), u0.coeffs.begin());
    const EvolutionTrace tr = evolve_nonlinear(u0, sc, ctx);
    std::ostringstream os;
    for (const Snapshot& s : tr.snaps) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", s.t, s.l2, s.energy);
      os << buf;
      for (const auto& [k, v] : s.mnorms) {
        std::snprintf(buf, sizeof buf, " %s=%.17g", k.c_str(), v);
        os << buf;
      }
      os << "\n";
    }
    return os.str();
  };
  const std::string a = run_once();
  const std::string b = run_once();
  r.pass = a == b;
  r.measured = r.pass ? 0.0 : 1.0;
  r.details = r.pass ? "two in-process pipeline runs byte-identical"
                     : "pipeline runs differ";
  return r;
}

// -- diagnostics (soft) -------------------------------------------------------

CheckResult check_window_robustness(const RunConfig& cfg) {
  CheckResult r;
  r.hard = false;
  r.tolerance = 0.05;
  const auto family = standard_family(check_seed(cfg, "window-robustness"), 20, 1, 24);
  TFLattice lat1 = cfg.lattice;
  lat1.dim = 1;
  TFLattice lat2 = lat1;
  lat2.window_width = 1.3;
  ModeTableCache c1(lat1, 24, false), c2(lat2, 24, false);
  double lo = 1e300, hi = 0.0;
  for (const HermiteField& f : family) {
    const double ratio = modulation_norm(f, 1.0, 1.0, c2) / modulation_norm(f, 1.0, 1.0, c1);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const double spread = (hi - lo) / (0.5 * (hi + lo));
  r.measured = spread;
  r.pass = spread <= r.tolerance;
  r.details = "M^{1,1} ratio sigma=1.3/1.0 in [" + fmt(lo) + ", " + fmt(hi) +
              "], spread " + fmt(spread);
  return r;
}

CheckResult check_embedding_report(const RunConfig& cfg) {
  CheckResult r;
  r.hard = false;
  r.tolerance = 0.0;
  TFLattice lat = cfg.lattice;
  lat.dim = 1;
  const TensorGrid grid{1, gauss_hermite_rule(96)};
  std::vector<HermiteField> dilated;
  for (double w : {0.5, 0.75, 1.0, 1.5, 2.0}) {
    DatumGaussian g;
    g.width = w;
    dilated.push_back(make_datum(g, 1, 48, grid));
  }
  NormSpace l2{false, 2.0, 2.0}, m21{true, 2.0, 1.0}, m22{true, 2.0, 2.0};
  const auto rows = embedding_ratio_report(dilated, {{m21, l2}, {l2, m22}}, lat, grid);
  bool finite = true;
  std::string det;
  for (const auto& row : rows) {
    finite = finite && std::isfinite(row.sup_ratio) && row.sup_ratio > 0.0;
    det += row.source.label() + "->" + row.target.label() + " sup " + fmt(row.sup_ratio) + "; ";
    r.measured = std::max(r.measured, row.sup_ratio);
  }
  // level-set splitting: f = f·χ_{|f|>1} + f·χ_{|f|≤1} with both pieces in
  // their Lebesgue classes (the L^q ⊂ L^p + L^r decomposition in action)
  GridField tall = synthesize(cplx(3.0, 0.0) * dilated.front(), grid);
  const auto [over, under] = split_by_level(tall);
  const double gp = grid_lp(over, 1.0), hr = grid_lp(under, 4.0);
  finite = finite && std::isfinite(gp) && std::isfinite(hr);
  det += "level-split |g|_1 " + fmt(gp) + ", |h|_4 " + fmt(hr) + "; ";
  r.pass = finite;
  r.details = det + "(diagnostic only: no sharp constants asserted)";
  return r;
}

CheckResult check_strichartz_report(const RunConfig& cfg) {
  CheckResult r;
  r.hard = false;
  r.tolerance = 0.0;
  RunConfig c1 = cfg;
  c1.dim = 1;
  c1.cutoff = 24;
  c1.quad_points = 48;
  EvolveContext ctx = c1.evolve_context(false);
  SolverConfig sc;
  sc.horizon = kPi;
  sc.dt = kPi / 64;
  sc.snapshot_dt = kPi / 16;
  sc.nonlin = std::monostate{};
  const double gamma = 0.5;
  const double q = 8.0 / gamma, rr = 4.0 / (2.0 - gamma);
  double sup = 0.0, sup_other_sign = 0.0;
  const auto family = standard_family(check_seed(cfg, "strichartz-report"), 5, 1, 24);
  for (const HermiteField& f : family) {
    const EvolutionTrace tr = evolve_nonlinear(f, sc, ctx);
    sup = std::max(sup, spacetime_norm(tr, q, rr, ctx.gh_grid) / f.l2_norm());
    SolverConfig sc2 = sc;
    sc2.linear_sign = +1;
    const EvolutionTrace tr2 = evolve_nonlinear(f, sc2, ctx);
    sup_other_sign = std::max(sup_other_sign, spacetime_norm(tr2, q, rr, ctx.gh_grid) / f.l2_norm());
  }
  r.measured = sup;
  r.pass = std::isfinite(sup) && std::abs(sup - sup_other_sign) / sup < 1e-10;
  r.details = "sup |U(.)phi|_{L^16 L^{8/3}} / |phi|_{L^2} = " + fmt(sup) +
              " (both signs agree to " + fmt(std::abs(sup - sup_other_sign) / sup) + ")";
  return r;
}

// The k-sum datum: its M^{2,2} norm converges along kmax while the oscillator
// energy grows unboundedly. The convergence rate is set by the coefficient
// decay d/q + ε: steep decay (q=1) settles within 2%, the slow q=2 tail
// (exponent 1.2 in l²) only within ~K^{−0.2}, so that case gets the bound the
// tail integral actually implies.
CheckResult check_rough_datum(const RunConfig&) {
  CheckResult r;
  r.hard = false;
  r.tolerance = 0.025;  // l² shell estimate plus the plane-wave correlations
  const TensorGrid grid{1, gauss_hermite_rule(360)};

  const HermiteField s8 = make_datum(DatumRough{1.0, 0.1, 8}, 1, 160, grid);
  const HermiteField s16 = make_datum(DatumRough{1.0, 0.1, 16}, 1, 160, grid);
  const double steep_change = std::abs(s16.l2_norm() - s8.l2_norm()) / s8.l2_norm();

  DatumInfo info16;
  const HermiteField f8 = make_datum(DatumRough{2.0, 0.1, 8}, 1, 160, grid);
  const HermiteField f16 = make_datum(DatumRough{2.0, 0.1, 16}, 1, 160, grid, &info16);
  const double slow_change = std::abs(f16.l2_norm() - f8.l2_norm()) / f8.l2_norm();
  // l² tail over the added shell: sqrt(Σ_{8<k≤16} k^{−1.2}) relative to the
  // base norm, doubled to absorb the non-orthogonality of the plane waves
  const double tail_model = std::sqrt((std::pow(8.0, -0.2) - std::pow(16.0, -0.2)) / 0.2);
  const double slow_bound = 2.0 * tail_model / f8.l2_norm();

  const double e8 = oscillator_energy(f8), e16 = oscillator_energy(f16);
  r.measured = steep_change;
  r.pass = steep_change <= r.tolerance && slow_change <= slow_bound && e16 > 1.5 * e8;
  r.details = "M^{2,2} change kmax 8->16: " + fmt(steep_change) + " (q=1), " +
              fmt(slow_change) + " (q=2, tail-model bound " + fmt(slow_bound) +
              "); energy proxy " + fmt(e8) + " -> " + fmt(e16) + "; l2 tail bound " +
              fmt(info16.rough_tail_bound);
  return r;
}

// -----------------------------------------------------------------------------

const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> defs = {
      {"mpp-isometry",
       "the harmonic propagator is an M^{p,p} isometry (p=1,2,4; t=0.3,1,pi/2)",
       true, check_mpp_isometry},
      {"mpq-nonpreservation",
       "M^{p,q} norms with p != q are not preserved by the flow (some t moves M^{1,2} by >= 1%)",
       true, check_mpq_nonpreservation},
      {"moyal-l2", "M^{2,2} equals the L^2 norm for a unit-norm Gaussian window",
       true, check_moyal},
      {"wigner-stft-identity",
       "(2pi)^{-d/2} <pi(x,y)f, g> = e^{-ixy/2} V_g f(y,-x) pointwise on the lattice",
       true, check_wigner_identity},
      {"special-hermite",
       "special Hermite functions are orthonormal on C^d and match the transform route",
       true, check_special_hermite},
      {"mass-conservation",
       "gauge-invariant Strang evolution conserves the L^2 norm (drift <= 1e-9 over T=5)",
       true, check_mass_conservation},
      {"linear-revival", "e^{-i pi H} f = (-1)^d f exactly in coefficients",
       true, check_linear_revival},
      {"strang-order", "Strang splitting converges at second order in dt",
       true, check_strang_order},
      {"picard-contraction",
       "with T = 1/(2cM^2) the Duhamel map contracts and matches the splitting flow",
       true, check_picard_contraction},
      {"hartree-kernel",
       "the |x|^{-gamma} kernel transform equals lambda*C(d,gamma)|xi|^{gamma-d} with exact homogeneity",
       true, check_hartree_kernel},
      {"hls-invariance",
       "the |x|^{-gamma} convolution ratio L^q/L^p is dilation-invariant (within 1%)",
       true, check_hls},
      {"trilinear-stability",
       "|(K*|f|^2)f| / |f|^3 in M^{1,1} is scale-invariant and stable across seeds",
       true, check_trilinear_stability},
      {"admissible-pair", "(8/gamma, 4d/(2d-gamma)) satisfies 2/q = d(1/2 - 1/r) exactly",
       true, check_admissible_pair},
      {"determinism", "a fixed seed reproduces the evolution pipeline bit-identically",
       true, check_determinism},
      {"window-robustness",
       "modulation norms with sigma = 1 and 1.3 windows are equivalent (5% spread)",
       false, check_window_robustness},
      {"embedding-report", "norm-ratio report across M^{p,q} and L^p spaces (diagnostic)",
       false, check_embedding_report},
      {"strichartz-report",
       "homogeneous spacetime norm of the free flow stays bounded (diagnostic)",
       false, check_strichartz_report},
      {"rough-datum",
       "the lattice-sum datum has stable M^{2,2} norm but growing oscillator energy",
       false, check_rough_datum},
  };
  return defs;
}

}  // namespace

std::vector<std::string> verify_check_ids() {
  std::vector<std::string> ids;
  for (const auto& def : registry()) ids.push_back(def.id);
  return ids;
}

VerifyOutcome run_verify(const RunConfig& cfg, const VerifyOptions& opts,
                         std::ostream& console) {
  const auto& defs = registry();
  std::vector<int> selected;
  for (int i = 0; i < int(defs.size()); ++i)
    if (opts.only.empty() || defs[i].id == opts.only) selected.push_back(i);
  if (selected.empty()) fail_usage("verify: unknown check id '" + opts.only + "'");

  int threads = opts.threads;
  if (threads <= 0) {
    if (const char* env = std::getenv("HERMION_THREADS")) threads = std::atoi(env);
    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min<int>(threads, int(selected.size()));

  std::vector<CheckResult> results(selected.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t mine = next.fetch_add(1);
      if (mine >= selected.size()) break;
      const CheckDef& def = defs[selected[mine]];
      CheckResult r;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        r = def.fn(cfg);
      } catch (const std::exception& e) {
        r.pass = false;
        r.details = std::string("check crashed: ") + e.what();
      }
      r.id = def.id;
      r.claim = def.claim;
      r.hard = def.hard;
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      results[mine] = std::move(r);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  VerifyOutcome out;
  out.all_hard_passed = true;
  int hard_total = 0, hard_passed = 0, soft_total = 0, soft_passed = 0;
  json checks = json::array();
  for (const CheckResult& r : results) {
    (r.hard ? hard_total : soft_total)++;
    if (r.pass) (r.hard ? hard_passed : soft_passed)++;
    if (r.hard && !r.pass) out.all_hard_passed = false;
    char line[512];
    std::snprintf(line, sizeof line, "[%s] %-22s measured=%-12.6g tol=%-10.6g (%.2fs)%s",
                  r.pass ? "PASS" : "FAIL", r.id.c_str(), r.measured, r.tolerance,
                  r.seconds, r.hard ? "" : " [diagnostic]");
    console << line << "\n        " << r.details << "\n";
    checks.push_back({{"id", r.id},
                      {"claim", r.claim},
                      {"hard", r.hard},
                      {"pass", r.pass},
                      {"measured", r.measured},
                      {"tolerance", r.tolerance},
                      {"details", r.details}});
  }
  json report = {{"format", "HERMION1"},
                 {"kind", "verify_report"},
                 {"version", version_string()},
                 {"config_hash", cfg.hash()},
                 {"checks", checks},
                 {"summary",
                  {{"hard_total", hard_total},
                   {"hard_passed", hard_passed},
                   {"soft_total", soft_total},
                   {"soft_passed", soft_passed}}}};
  out.report_json = report.dump(2) + "\n";
  out.results = std::move(results);

  std::string path = opts.report_path;
  if (path.empty()) {
    fs::create_directories(cfg.output_dir);
    path = (fs::path(cfg.output_dir) / "verify_report.json").string();
  } else if (fs::path(path).has_parent_path()) {
    fs::create_directories(fs::path(path).parent_path());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_io("verify: cannot write report '" + path + "'");
  os << out.report_json;
  console << (out.all_hard_passed ? "verify: all hard checks passed\n"
                                  : "verify: HARD CHECK FAILURES\n");
  console << "report: " << path << "\n";
  return out;
}

}  // namespace hermion
