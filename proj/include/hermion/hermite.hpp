#pragma once

#include <span>

#include "hermion/types.hpp"

namespace hermion {

// ---------------------------------------------------------------------------
// 1D Hermite functions h_k (eigenfunctions of −d²/dx² + x², L²-normalized).
// Evaluation always goes through the scaled three-term recurrence
//   h_{k+1} = sqrt(2/(k+1)) x h_k − sqrt(k/(k+1)) h_{k−1},  h_0 = π^{−1/4} e^{−x²/2},
// which keeps every intermediate O(1); factorial-based formulas overflow
// near k ≈ 150 and live only in test oracles.
// ---------------------------------------------------------------------------

double hermite_1d(int k, double x);

// h_0..h_{count−1} at x, written to out[0..count).
void hermite_values(int count, double x, double* out);

// Π_j h_{α_j}(x_j); throws on dimension mismatch.
double hermite_nd(std::span<const int> alpha, std::span<const double> x);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

enum class RuleKind { gauss_hermite, uniform_box };

struct QuadratureRule {
  RuleKind kind = RuleKind::gauss_hermite;
  std::vector<double> nodes;          // strictly increasing
  std::vector<double> weights;        // classical weights: Σ w_i f(x_i) ≈ ∫ f e^{−x²} (GH)
  std::vector<double> plain_weights;  // Σ W_i f(x_i) ≈ ∫ f dx for integrands with Gaussian decay
  double box_halfwidth = 0.0;         // uniform_box only

  int size() const { return static_cast<int>(nodes.size()); }
};

// Nodes via Newton iteration on the scaled recurrence (tolerance 1e−14,
// max 100 iterations); weights via the Christoffel sum of scaled functions,
// so no e^{±x²} factor is ever formed explicitly.
QuadratureRule gauss_hermite_rule(int points);

// n equispaced nodes x_i = −L + i·(2L/n); plain weights 2L/n (periodic/DFT layout).
QuadratureRule uniform_box_rule(int points, double half_width);

// Tensor power of a single 1D rule.
struct TensorGrid {
  int dim = 1;
  QuadratureRule axis;

  std::size_t size() const { return pow_size(axis.size(), dim); }
};

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

struct HermiteField {
  int dim = 1;
  int cutoff = 0;            // modes per dimension
  std::vector<cplx> coeffs;  // cutoff^dim entries, row-major over α

  HermiteField() = default;
  HermiteField(int d, int N) : dim(d), cutoff(N), coeffs(pow_size(N, d), cplx{}) {}

  double l2_norm() const;
  std::size_t size() const { return coeffs.size(); }

  static HermiteField basis(int d, int N, std::span<const int> alpha);
};

HermiteField operator+(const HermiteField& a, const HermiteField& b);
HermiteField operator-(const HermiteField& a, const HermiteField& b);
HermiteField operator*(cplx s, const HermiteField& f);
double l2_distance(const HermiteField& a, const HermiteField& b);

struct GridField {
  TensorGrid grid;
  std::vector<cplx> values;  // grid.size() entries, row-major over node tuples

  std::size_t size() const { return values.size(); }
};

// Quadrature-weighted norms on grid samples (plain weights tensorized).
double grid_l2(const GridField& u);
double grid_lp(const GridField& u, double p);  // p = inf → max |u|

// c_α ≈ ⟨u, Φ_α⟩ by tensorized 1D transforms. Gauss–Hermite grids require
// at least N+1 points per dimension; uniform boxes at least 2N.
HermiteField analyze(const GridField& u, int cutoff);

// Pointwise Σ_α c_α Φ_α on the tensor grid.
GridField synthesize(const HermiteField& f, const TensorGrid& grid);

// Evaluate Σ_α c_α Φ_α at one point (d-dimensional).
cplx evaluate_field(const HermiteField& f, std::span<const double> x);

}  // namespace hermion
