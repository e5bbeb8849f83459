#pragma once

#include <map>
#include <optional>

#include "hermion/nonlinearity.hpp"
#include "hermion/propagator.hpp"

namespace hermion {

// ---------------------------------------------------------------------------
// Nonlinearity selection
// ---------------------------------------------------------------------------

struct PowerNonlin {
  int k = 1;
  double sign = -1.0;
};
struct HartreeNonlin {
  KernelSpec kernel = HartreeKernel{};
  int k = 1;
};
struct EntireNonlin {
  RealEntireSeries series = RealEntireSeries::cubic(-1.0);
};
// monostate = free (linear) evolution
using NonlinSpec = std::variant<std::monostate, PowerNonlin, HartreeNonlin, EntireNonlin>;

enum class Scheme { picard, lie, strang };

struct SolverConfig {
  double horizon = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::strang;
  NonlinSpec nonlin;
  int picard_iters = 12;
  int time_nodes = 8;     // Gauss–Legendre nodes per Duhamel evaluation
  int time_samples = 9;   // Chebyshev–Lobatto samples storing Picard iterates
  double fixed_point_tol = 1e-10;
  double conservation_tol = 1e-6;
  int linear_sign = -1;
  double snapshot_dt = 0.1;
  std::vector<double> monitor_ps;  // modulation exponents logged at snapshots
  double blowup_factor = 1e6;

  void validate() const;
};

// Grids the nonlinear terms evaluate on: pointwise terms use the
// Gauss–Hermite grid, convolution terms the uniform box. The lattice is only
// touched when modulation monitors are requested.
struct EvolveContext {
  TensorGrid gh_grid;
  TensorGrid box_grid;
  std::optional<TFLattice> lattice;
};

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

struct Snapshot {
  double t = 0.0;
  HermiteField field;
  double l2 = 0.0;
  double energy = 0.0;                   // Σ (2|α|+d)|c_α|²
  std::map<std::string, double> mnorms;  // "m11", "m22", ...
  std::vector<std::string> flags;
};

struct EvolutionTrace {
  std::vector<Snapshot> snaps;
  bool aborted = false;
  std::string abort_reason;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// F(u) as a coefficient-space field (used by the Duhamel integral).
HermiteField apply_nonlinearity(const HermiteField& u, const NonlinSpec& nl,
                                const EvolveContext& ctx, int cutoff);

struct PicardResult {
  HermiteField at_horizon;
  std::vector<double> diffs;   // successive sup-in-time l2 differences
  std::vector<double> ratios;  // diffs[i]/diffs[i−1]
  bool converged = false;
  int iterations = 0;
};

// Fixed-point iteration of u ↦ U(t)u₀ − i∫₀ᵗ U(t−τ)F(u(τ))dτ, iterates held
// at Chebyshev–Lobatto samples and the τ-integral done by Gauss–Legendre.
// Throws (check_failure) when the difference ratio stays ≥ 1 twice in a row.
PicardResult picard_solve(const HermiteField& u0, const SolverConfig& cfg,
                          const EvolveContext& ctx);

// T = 1/(2cM²) capped at `cap`; M = 0 returns the cap (free flow needs no
// smallness).
double local_existence_time(double M, double c, double cap);

// Lie / Strang splitting with exact spectral linear flow and pointwise
// nonlinear phase steps. Gauge nonlinearities (power, Hartree) get the exact
// modulus-preserving rotation; real-entire ones take one RK4 substep.
EvolutionTrace evolve_nonlinear(const HermiteField& u0, const SolverConfig& cfg,
                                const EvolveContext& ctx);

// 2/q = d(1/2 − 1/r); r = 2 maps to q = ∞. Domain: 2 ≤ r ≤ ∞ (d=1),
// 2 ≤ r < ∞ (d=2), 2 ≤ r < 2d/(d−2) (d≥3).
double admissible_pair(double r, int dim);

// Exact rational arithmetic for the admissibility identity.
struct Rational {
  long long num = 0, den = 1;
  Rational() = default;
  Rational(long long n, long long d);
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

// Checks 2/q = d(1/2 − 1/r) exactly for q = 8/γ, r = 4d/(2d−γ).
bool strichartz_pair_exact(const Rational& gamma, int dim);

// Discretized ‖u‖_{L^q_t L^r_x}: spatial norms by Gauss–Hermite quadrature on
// each snapshot, trapezoid in time; q = ∞ is the max over snapshots.
double spacetime_norm(const EvolutionTrace& trace, double q, double r,
                      const TensorGrid& grid);

}  // namespace hermion
