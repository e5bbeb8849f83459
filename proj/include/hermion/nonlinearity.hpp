#pragma once

#include <functional>
#include <variant>

#include "hermion/boxfft.hpp"
#include "hermion/hermite.hpp"
#include "hermion/tf.hpp"

namespace hermion {

// ---------------------------------------------------------------------------
// Convolution kernels
// ---------------------------------------------------------------------------

// K(x) = λ |x|^{−γ}, the homogeneous Hartree potential.
struct HartreeKernel {
  double lambda = 1.0;
  double gamma = 0.5;
};

// Kernel given by its (real, even) Fourier transform K̂(ξ).
struct FourierMultiplierKernel {
  std::function<double(std::span<const double>)> hat;
  std::string label = "multiplier";
};

// Kernel sampled in real space on a uniform box (same layout as GridField).
struct GridKernel {
  GridField samples;
};

using KernelSpec = std::variant<HartreeKernel, FourierMultiplierKernel, GridKernel>;

// Checks 0 < γ < d; `strict` additionally enforces γ < min{2, d/2} (the
// well-posedness window the solver operates in).
void validate_hartree(const HartreeKernel& k, int dim, bool strict);

// K̂(ξ) = λ C(d,γ) |ξ|^{−(d−γ)} with C(d,γ) = 2^{d/2−γ} Γ((d−γ)/2)/Γ(γ/2)
// (unitary Fourier normalization; C(d, d/2) = 1). ξ = 0 is rejected — DFT
// sampling handles the singular bin via the regularization below.
double hartree_constant(int dim, double gamma);
double hartree_kernel_fourier(const HartreeKernel& k, std::span<const double> xi, int dim);

// Splitting K̂ = χ_{|ξ|≤1}K̂ + χ_{|ξ|>1}K̂ with reported quadrature norms:
// ‖k1‖_{L^1} finite for γ < d, ‖k2‖_{L^r} finite for r > d/(d−γ).
struct KernelSplit {
  FourierMultiplierKernel k1;  // compactly supported low-frequency part
  FourierMultiplierKernel k2;
  double k1_l1 = 0.0;
  std::function<double(double)> k2_lr;  // r ↦ ‖k2‖_{L^r}, throws if divergent
};
KernelSplit kernel_split(const HartreeKernel& k, int dim);

// ---------------------------------------------------------------------------
// Nonlinear terms
// ---------------------------------------------------------------------------

// ±|u|^{2k} u, pointwise.
GridField power_nonlinearity(const GridField& u, int k, double sign);

// The real potential W = K ∗ |u|^{2k} on a uniform box (DFT convolution with
// continuous normalization; imaginary residue is checked ≤ 1e−12 relative and
// discarded), plus the product (K∗|u|^{2k})u.
std::vector<double> hartree_potential(const GridField& u, const KernelSpec& kernel, int k);
GridField hartree_term(const GridField& u, const KernelSpec& kernel, int k);

// F(s,t) = Σ a_{mn} s^m t^n truncated at total degree ≤ deg, a_{00} = 0.
class RealEntireSeries {
 public:
  RealEntireSeries(int degree, std::vector<cplx> dense_coeffs);  // (deg+1)² row-major a[m][n]
  static RealEntireSeries cubic(double sign);  // F(u) = sign·|u|²u

  int degree() const { return deg_; }
  cplx coeff(int m, int n) const { return a_[std::size_t(m) * (deg_ + 1) + n]; }
  cplx eval(double s, double t) const;

  RealEntireSeries majorant() const;    // coefficients |a_{mn}|
  RealEntireSeries partial_s() const;
  RealEntireSeries partial_t() const;
  // Majorant tail bound Σ_{m+n=deg+1..} |a|·s^m t^n is zero for truncated
  // series; reported as the degree-(deg) shell value at (s,t) for diagnostics.
  double top_shell(double s, double t) const;

 private:
  int deg_;
  std::vector<cplx> a_;
};

// Pointwise F(u₁, u₂) with u = u₁ + iu₂.
GridField real_entire_apply(const RealEntireSeries& series, const GridField& u);

// f restricted to {|f|>1} and its complement; g + h = f exactly.
std::pair<GridField, GridField> split_by_level(const GridField& f);

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

// ‖|x|^{−γ} ∗ f‖_{L^q} / ‖f‖_{L^p} with 1/q = 1/p + γ/d − 1. d=1 uses direct
// convolution with exact per-cell kernel integrals; d≥2 the DFT multiplier.
double hls_ratio(const GridField& f, double gamma, double p);

// Context shared by the modulation-norm diagnostics: which lattice measures
// the norms and which box/cutoff carries the nonlinear product.
struct NormContext {
  TFLattice lattice;
  TensorGrid box;
  int product_cutoff = 32;
};

// ‖(K∗|f|²)f‖_{M^{p,q}} / ‖f‖³_{M^{p,q}} (degree-3 homogeneous, hence exactly
// scale-invariant). Exponent windows: Hartree 1≤p≤2, 1≤q<2d/(d+γ);
// Fourier multiplier 1≤p≤2, 1≤q≤2; grid kernels q = 1.
double trilinear_ratio(const HermiteField& f, double p, double q,
                       const KernelSpec& kernel, const NormContext& ctx);

// ‖NL(f)−NL(g)‖ / ((‖f‖²+‖f‖‖g‖+‖g‖²)·‖f−g‖), same norms as trilinear_ratio.
double trilinear_lipschitz_ratio(const HermiteField& f, const HermiteField& g,
                                 double p, double q, const KernelSpec& kernel,
                                 const NormContext& ctx);

}  // namespace hermion
