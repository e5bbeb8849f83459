#include "hermion/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace hermion {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

void SolverConfig::validate() const {
  if (!(horizon > 0.0)) fail_usage("solver: horizon must be positive");
  if (!(dt > 0.0) || dt > horizon) fail_usage("solver: need 0 < dt <= horizon");
  if (picard_iters < 2) fail_usage("solver: picard_iters must be >= 2");
  if (time_nodes < 1 || time_samples < 2) fail_usage("solver: bad time discretization");
  if (!(fixed_point_tol > 0.0) || !(conservation_tol > 0.0))
    fail_usage("solver: tolerances must be positive");
  if (linear_sign != 1 && linear_sign != -1) fail_usage("solver: linear_sign must be ±1");
}

// ---------------------------------------------------------------------------
// Quadrature in time
// ---------------------------------------------------------------------------

namespace {

// Gauss–Legendre on [−1,1] by Newton on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

// Chebyshev–Lobatto samples of [0, T], ascending, endpoints included.
std::vector<double> chebyshev_samples(int n, double T) {
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j)
    t[j] = 0.5 * T * (1.0 - std::cos(kPi * j / (n - 1)));
  return t;
}

// Barycentric interpolation of coefficient vectors stored at Lobatto nodes.
HermiteField interpolate_fields(const std::vector<HermiteField>& fields,
                                const std::vector<double>& nodes, double t) {
  const int n = static_cast<int>(nodes.size());
  for (int j = 0; j < n; ++j)
    if (t == nodes[j]) return fields[j];
  double wsum = 0.0;
  std::vector<double> lam(n);
  for (int j = 0; j < n; ++j) {
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n - 1) w *= 0.5;
    lam[j] = w / (t - nodes[j]);
    wsum += lam[j];
  }
  HermiteField out(fields[0].dim, fields[0].cutoff);
  for (int j = 0; j < n; ++j) {
    const double c = lam[j] / wsum;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
      out.coeffs[i] += c * fields[j].coeffs[i];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Nonlinear term evaluation
// ---------------------------------------------------------------------------

HermiteField apply_nonlinearity(const HermiteField& u, const NonlinSpec& nl,
                                const EvolveContext& ctx, int cutoff) {
  if (std::holds_alternative<std::monostate>(nl)) {
    HermiteField zero(u.dim, cutoff);
    return zero;
  }
  if (const auto* pw = std::get_if<PowerNonlin>(&nl)) {
    GridField g = synthesize(u, ctx.gh_grid);
    return analyze(power_nonlinearity(g, pw->k, pw->sign), cutoff);
  }
  if (const auto* ha = std::get_if<HartreeNonlin>(&nl)) {
    GridField g = synthesize(u, ctx.box_grid);
    return analyze(hartree_term(g, ha->kernel, ha->k), cutoff);
  }
  const auto& en = std::get<EntireNonlin>(nl);
  GridField g = synthesize(u, ctx.gh_grid);
  return analyze(real_entire_apply(en.series, g), cutoff);
}

// ---------------------------------------------------------------------------
// Picard / Duhamel
// ---------------------------------------------------------------------------

PicardResult picard_solve(const HermiteField& u0, const SolverConfig& cfg,
                          const EvolveContext& ctx) {
  cfg.validate();
  const double T = cfg.horizon;
  const int S = cfg.time_samples;
  const int sign = cfg.linear_sign;
  const std::vector<double> tau = chebyshev_samples(S, T);
  std::vector<double> glx, glw;
  gauss_legendre(cfg.time_nodes, glx, glw);

  std::vector<HermiteField> free_flow(S, HermiteField(u0.dim, u0.cutoff));
  for (int j = 0; j < S; ++j) free_flow[j] = evolve_linear(u0, tau[j], sign);
  std::vector<HermiteField> cur = free_flow;

  PicardResult res;
  res.at_horizon = cur[S - 1];
  double prev_diff = -1.0;
  int rising = 0;
  for (int iter = 0; iter < cfg.picard_iters; ++iter) {
    std::vector<HermiteField> next(S, HermiteField(u0.dim, u0.cutoff));
    next[0] = u0;  // τ = 0: the integral is empty
    for (int j = 1; j < S; ++j) {
      HermiteField integral(u0.dim, u0.cutoff);
      const double tj = tau[j];
      for (int s = 0; s < cfg.time_nodes; ++s) {
        const double theta = 0.5 * tj * (glx[s] + 1.0);
        const HermiteField u_theta = interpolate_fields(cur, tau, theta);
        const HermiteField f_theta = apply_nonlinearity(u_theta, cfg.nonlin, ctx, u0.cutoff);
        const HermiteField propagated = evolve_linear(f_theta, tj - theta, sign);
        const double wq = 0.5 * tj * glw[s];
        for (std::size_t i = 0; i < integral.coeffs.size(); ++i)
          integral.coeffs[i] += wq * propagated.coeffs[i];
      }
      next[j] = free_flow[j];
      for (std::size_t i = 0; i < next[j].coeffs.size(); ++i)
        next[j].coeffs[i] -= cplx(0.0, 1.0) * integral.coeffs[i];
    }
    double diff = 0.0;
    for (int j = 0; j < S; ++j) diff = std::max(diff, l2_distance(next[j], cur[j]));
    res.diffs.push_back(diff);
    if (prev_diff > 0.0) {
      const double ratio = diff / prev_diff;
      res.ratios.push_back(ratio);
      if (ratio >= 1.0) {
        if (++rising >= 2)
          throw Error(ErrorCode::check_failure,
                      "picard_solve: no contraction (difference ratio >= 1 twice); "
                      "horizon too large for this datum");
      } else {
        rising = 0;
      }
    }
    cur = std::move(next);
    res.iterations = iter + 1;
    if (diff < cfg.fixed_point_tol) {
      res.converged = true;
      break;
    }
    prev_diff = diff;
  }
  res.at_horizon = cur[S - 1];
  return res;
}

double local_existence_time(double M, double c, double cap) {
  if (M < 0.0 || c <= 0.0 || cap <= 0.0) fail_usage("local_existence_time: bad arguments");
  if (M == 0.0) return cap;
  return std::min(cap, 1.0 / (2.0 * c * M * M));
}

// ---------------------------------------------------------------------------
// Splitting integrators
// ---------------------------------------------------------------------------

namespace {

// One nonlinear substep of length dt, ∂ₜu = −iF(u), in place on coefficients.
void nonlinear_substep(HermiteField& c, double dt, const NonlinSpec& nl,
                       const EvolveContext& ctx) {
  if (std::holds_alternative<std::monostate>(nl)) return;
  if (const auto* pw = std::get_if<PowerNonlin>(&nl)) {
    GridField g = synthesize(c, ctx.gh_grid);
    for (cplx& v : g.values)
      v *= std::polar(1.0, -dt * pw->sign * std::pow(std::norm(v), pw->k));
    c = analyze(g, c.cutoff);
    return;
  }
  if (const auto* ha = std::get_if<HartreeNonlin>(&nl)) {
    GridField g = synthesize(c, ctx.box_grid);
    const std::vector<double> W = hartree_potential(g, ha->kernel, ha->k);
    for (std::size_t i = 0; i < g.values.size(); ++i)
      g.values[i] *= std::polar(1.0, -dt * W[i]);
    c = analyze(g, c.cutoff);
    return;
  }
  // Real-entire: no exact phase flow; single RK4 step on the pointwise ODE.
  const auto& en = std::get<EntireNonlin>(nl);
  GridField g = synthesize(c, ctx.gh_grid);
  const cplx mi(0.0, -1.0);
  for (cplx& v : g.values) {
    auto rhs = [&](cplx u) { return mi * en.series.eval(u.real(), u.imag()); };
    const cplx k1 = rhs(v);
    const cplx k2 = rhs(v + 0.5 * dt * k1);
    const cplx k3 = rhs(v + 0.5 * dt * k2);
    const cplx k4 = rhs(v + dt * k3);
    v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  c = analyze(g, c.cutoff);
}

void record_snapshot(EvolutionTrace& trace, double t, const HermiteField& c,
                     const SolverConfig& cfg, const EvolveContext& ctx,
                     std::vector<std::string> flags = {}) {
  Snapshot s;
  s.t = t;
  s.field = c;
  s.l2 = c.l2_norm();
  s.energy = oscillator_energy(c);
  if (ctx.lattice.has_value()) {
    for (double p : cfg.monitor_ps) {
      char key[40];
      std::snprintf(key, sizeof key, "m%g%g", p, p);
      s.mnorms[key] = modulation_norm(c, p, p, *ctx.lattice);
    }
  }
  s.flags = std::move(flags);
  trace.snaps.push_back(std::move(s));
}

}  // namespace

EvolutionTrace evolve_nonlinear(const HermiteField& u0, const SolverConfig& cfg,
                                const EvolveContext& ctx) {
  cfg.validate();
  if (cfg.scheme == Scheme::picard)
    fail_usage("evolve_nonlinear: picard is driven through picard_solve");
  const int sign = cfg.linear_sign;
  const long nsteps = std::lround(cfg.horizon / cfg.dt);
  const double dt = cfg.horizon / nsteps;
  const long snap_every = std::max(1L, std::lround(cfg.snapshot_dt / dt));

  EvolutionTrace trace;
  HermiteField c = u0;
  const double l2_0 = c.l2_norm();
  const double energy_0 = oscillator_energy(c);
  record_snapshot(trace, 0.0, c, cfg, ctx);

  const bool gauge = std::holds_alternative<PowerNonlin>(cfg.nonlin) ||
                     std::holds_alternative<HartreeNonlin>(cfg.nonlin) ||
                     std::holds_alternative<std::monostate>(cfg.nonlin);

  for (long step = 1; step <= nsteps; ++step) {
    if (cfg.scheme == Scheme::strang) {
      c = evolve_linear(c, 0.5 * dt, sign);
      nonlinear_substep(c, dt, cfg.nonlin, ctx);
      c = evolve_linear(c, 0.5 * dt, sign);
    } else {  // Lie
      c = evolve_linear(c, dt, sign);
      nonlinear_substep(c, dt, cfg.nonlin, ctx);
    }
    const double t = step * dt;
    if (step % snap_every == 0 || step == nsteps) {
      const double l2 = c.l2_norm();
      const double energy = oscillator_energy(c);
      std::vector<std::string> flags;
      if (gauge && l2_0 > 0.0 && std::abs(l2 - l2_0) > cfg.conservation_tol * l2_0) {
        record_snapshot(trace, t, c, cfg, ctx, {"conservation-breach"});
        trace.aborted = true;
        trace.abort_reason = "conservation drift " + std::to_string(std::abs(l2 - l2_0) / l2_0);
        throw Error(ErrorCode::check_failure, "evolve_nonlinear: " + trace.abort_reason);
      }
      if (l2 > cfg.blowup_factor * std::max(l2_0, 1e-300) ||
          energy > cfg.blowup_factor * std::max(energy_0, 1e-300)) {
        record_snapshot(trace, t, c, cfg, ctx, {"blowup-guard"});
        trace.aborted = true;
        trace.abort_reason = "monitored norm exceeded blowup guard";
        return trace;
      }
      record_snapshot(trace, t, c, cfg, ctx, std::move(flags));
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Strichartz bookkeeping
// ---------------------------------------------------------------------------

double admissible_pair(double r, int dim) {
  if (dim < 1) fail_usage("admissible_pair: bad dimension");
  if (r < 2.0) fail_usage("admissible_pair: need r >= 2");
  if (dim == 2 && std::isinf(r)) fail_usage("admissible_pair: r < inf required for d = 2");
  if (dim >= 3 && !(r < 2.0 * dim / (dim - 2)))
    fail_usage("admissible_pair: r outside [2, 2d/(d-2))");
  if (dim >= 2 && std::isinf(r)) fail_usage("admissible_pair: r = inf only allowed for d = 1");
  const double rhs = dim * (0.5 - (std::isinf(r) ? 0.0 : 1.0 / r));
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();  // r = 2 endpoint
  return 2.0 / rhs;
}

namespace {
long long gcd_ll(long long a, long long b) {
  while (b) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}
}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) fail_usage("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = gcd_ll(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) fail_usage("rational: division by zero");
  return Rational(num * o.den, den * o.num);
}

bool strichartz_pair_exact(const Rational& gamma, int dim) {
  // q = 8/γ, r = 4d/(2d−γ); check 2/q = d(1/2 − 1/r)
  const Rational q = Rational(8, 1) / gamma;
  const Rational r = Rational(4 * dim, 1) / (Rational(2 * dim, 1) - gamma);
  const Rational lhs = Rational(2, 1) / q;
  const Rational rhs = Rational(dim, 1) * (Rational(1, 2) - Rational(1, 1) / r);
  return lhs == rhs;
}

double spacetime_norm(const EvolutionTrace& trace, double q, double r,
                      const TensorGrid& grid) {
  if (trace.snaps.empty()) fail_usage("spacetime_norm: empty trace");
  std::vector<double> s(trace.snaps.size());
  for (std::size_t i = 0; i < trace.snaps.size(); ++i)
    s[i] = grid_lp(synthesize(trace.snaps[i].field, grid), r);
  if (std::isinf(q)) return *std::max_element(s.begin(), s.end());
  if (trace.snaps.size() == 1) return s[0];  // duration-free trace: spatial norm
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double w = trace.snaps[i + 1].t - trace.snaps[i].t;
    acc += 0.5 * w * (std::pow(s[i], q) + std::pow(s[i + 1], q));
  }
  return std::pow(acc, 1.0 / q);
}

}  // namespace hermion
