#include "hermion/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace hermion {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

double surface_area(int d) {
  // |S^{d−1}|: 2, 2π, 4π for d = 1, 2, 3
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}
}  // namespace

void validate_hartree(const HartreeKernel& k, int dim, bool strict) {
  if (!(k.gamma > 0.0) || !(k.gamma < dim))
    fail_usage("hartree kernel: need 0 < gamma < d");
  if (strict && !(k.gamma < std::min(2.0, 0.5 * dim)))
    fail_usage("hartree kernel: solver scope needs gamma < min{2, d/2}");
}

double hartree_constant(int dim, double gamma) {
  if (!(gamma > 0.0) || !(gamma < dim)) fail_usage("hartree_constant: need 0 < gamma < d");
  return std::exp((0.5 * dim - gamma) * std::log(2.0) +
                  std::lgamma(0.5 * (dim - gamma)) - std::lgamma(0.5 * gamma));
}

double hartree_kernel_fourier(const HartreeKernel& k, std::span<const double> xi, int dim) {
  validate_hartree(k, dim, /*strict=*/false);
  double r2 = 0.0;
  for (double c : xi) r2 += c * c;
  if (r2 == 0.0) fail_usage("hartree_kernel_fourier: xi = 0 is singular");
  return k.lambda * hartree_constant(dim, k.gamma) *
         std::pow(std::sqrt(r2), -(dim - k.gamma));
}

// ---------------------------------------------------------------------------
// Kernel splitting at |ξ| = 1
// ---------------------------------------------------------------------------

namespace {

// Graded-panel quadrature of r^e over (0, 1]: geometric panels down to 1e−14.
double graded_radial(double e) {
  double total = 0.0;
  double lo = 1e-14;
  // closed form on (0, lo] as the limit term
  total += std::pow(lo, e + 1.0) / (e + 1.0);
  static const double gl_x[6] = {-0.9324695142031521, -0.6612093864662645,
                                 -0.2386191860831969, 0.2386191860831969,
                                 0.6612093864662645,  0.9324695142031521};
  static const double gl_w[6] = {0.1713244923791704, 0.3607615730481386,
                                 0.4679139345726910, 0.4679139345726910,
                                 0.3607615730481386, 0.1713244923791704};
  while (lo < 1.0) {
    double hi = std::min(1.0, 2.0 * lo);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < 6; ++i) total += half * gl_w[i] * std::pow(mid + half * gl_x[i], e);
    lo = hi;
  }
  return total;
}

}  // namespace

KernelSplit kernel_split(const HartreeKernel& k, int dim) {
  validate_hartree(k, dim, /*strict=*/false);
  const double C = hartree_constant(dim, k.gamma);
  const double lambda = k.lambda;
  const double gamma = k.gamma;
  const int d = dim;
  KernelSplit split;
  split.k1.label = "hartree-low";
  split.k1.hat = [lambda, C, gamma, d](std::span<const double> xi) {
    double r2 = 0.0;
    for (double c : xi) r2 += c * c;
    const double r = std::sqrt(r2);
    if (r == 0.0 || r > 1.0) return 0.0;
    return lambda * C * std::pow(r, gamma - d);
  };
  split.k2.label = "hartree-high";
  split.k2.hat = [lambda, C, gamma, d](std::span<const double> xi) {
    double r2 = 0.0;
    for (double c : xi) r2 += c * c;
    const double r = std::sqrt(r2);
    if (r <= 1.0) return 0.0;
    return lambda * C * std::pow(r, gamma - d);
  };
  // ‖k1‖_{L^1} = |λ|C ω_{d−1} ∫_0^1 r^{γ−d} r^{d−1} dr, quadrature on graded panels
  split.k1_l1 = std::abs(lambda) * C * surface_area(d) * graded_radial(gamma - 1.0);
  split.k2_lr = [lambda, C, gamma, d](double r_exp) {
    if (!(r_exp > double(d) / (d - gamma)))
      fail_usage("kernel_split: ||k2||_{L^r} diverges for r <= d/(d-gamma)");
    if (std::isinf(r_exp)) return std::abs(lambda) * C;  // sup over |ξ|>1 at |ξ|=1
    // ∫_1^∞ (C|λ| r^{γ−d})^r r^{d−1} dr, exact power integral
    const double e = (gamma - d) * r_exp + (d - 1);
    const double body = surface_area(d) * (-1.0 / (e + 1.0));  // ∫_1^∞ r^e dr = −1/(e+1)
    return std::abs(lambda) * C * std::pow(body, 1.0 / r_exp);
  };
  return split;
}

// ---------------------------------------------------------------------------
// Box convolution
// ---------------------------------------------------------------------------

namespace {

// Multiplier samples for the convolution theorem: bin value approximating
// K̂(ξ_m). The Hartree kernel in d=1 uses exact cell averages of the power
// singularity (closed-form antiderivative); other dims assign the ξ=0 bin the
// average of K̂ over the first radial shell (the 2d axis neighbours).
std::vector<double> sample_multiplier(const KernelSpec& kernel, const BoxTransform& ft,
                                      int dim) {
  const int n = ft.points();
  const std::size_t total = pow_size(n, dim);
  std::vector<double> khat(total, 0.0);
  const double dxi = kPi / ft.half_width();

  if (const auto* hk = std::get_if<HartreeKernel>(&kernel)) {
    validate_hartree(*hk, dim, /*strict=*/false);
    const double C = hk->lambda * hartree_constant(dim, hk->gamma);
    const double e = hk->gamma - dim;  // K̂ ∝ |ξ|^e, e ∈ (−d, 0)
    if (dim == 1) {
      for (int b = 0; b < n; ++b) {
        const double xi = ft.frequency(b);
        const double lo = std::abs(xi) - 0.5 * dxi, hi = std::abs(xi) + 0.5 * dxi;
        double cell;
        if (lo < 0.0)  // the bin straddling 0: ∫ over |ξ| ≤ dξ/2, both signs
          cell = 2.0 * std::pow(0.5 * dxi, e + 1.0) / (e + 1.0);
        else
          cell = (std::pow(hi, e + 1.0) - std::pow(lo, e + 1.0)) / (e + 1.0);
        khat[b] = C * cell / dxi;
      }
    } else {
      std::vector<int> mi(dim);
      for (std::size_t idx = 0; idx < total; ++idx) {
        decode_index(idx, n, dim, mi.data());
        double r2 = 0.0;
        for (int j = 0; j < dim; ++j) {
          const double xi = ft.frequency(mi[j]);
          r2 += xi * xi;
        }
        khat[idx] = (r2 == 0.0) ? C * std::pow(dxi, e) : C * std::pow(std::sqrt(r2), e);
      }
    }
    return khat;
  }

  if (const auto* fm = std::get_if<FourierMultiplierKernel>(&kernel)) {
    std::vector<int> mi(dim);
    std::vector<double> xi(dim);
    for (std::size_t idx = 0; idx < total; ++idx) {
      decode_index(idx, n, dim, mi.data());
      for (int j = 0; j < dim; ++j) xi[j] = ft.frequency(mi[j]);
      khat[idx] = fm->hat(xi);
    }
    return khat;
  }

  const auto& gk = std::get<GridKernel>(kernel);
  if (gk.samples.grid.axis.kind != RuleKind::uniform_box)
    fail_usage("grid kernel: samples must live on a uniform box");
  if (gk.samples.grid.dim != dim || gk.samples.grid.axis.size() != n ||
      gk.samples.grid.axis.box_halfwidth != ft.half_width())
    fail_usage("grid kernel: sample grid must match the convolution box");
  for (const cplx& v : gk.samples.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail_usage("grid kernel: non-finite sample");
  std::vector<cplx> spec = ft.forward(gk.samples.values);
  for (std::size_t idx = 0; idx < total; ++idx) khat[idx] = spec[idx].real();
  return khat;
}

}  // namespace

std::vector<double> hartree_potential(const GridField& u, const KernelSpec& kernel, int k) {
  if (u.grid.axis.kind != RuleKind::uniform_box)
    fail_usage("hartree_potential: field must live on a uniform box");
  if (k < 1) fail_usage("hartree_potential: k must be positive");
  const int dim = u.grid.dim;
  const int n = u.grid.axis.size();
  BoxTransform ft(dim, n, u.grid.axis.box_halfwidth);

  std::vector<cplx> density(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i)
    density[i] = std::pow(std::norm(u.values[i]), k);  // |u|^{2k}

  std::vector<cplx> spec = ft.forward(density);
  const std::vector<double> khat = sample_multiplier(kernel, ft, dim);
  const double conv_scale = std::pow(2.0 * kPi, 0.5 * dim);  // (K∗v)^ = (2π)^{d/2} K̂ v̂
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= conv_scale * khat[i];
  std::vector<cplx> conv = ft.inverse(spec);

  double max_abs = 0.0, max_imag = 0.0;
  for (const cplx& v : conv) {
    max_abs = std::max(max_abs, std::abs(v));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  if (max_abs > 0.0 && max_imag > 1e-12 * max_abs)
    throw Error(ErrorCode::check_failure,
                "hartree_potential: kernel is not real-even (imaginary residue " +
                    std::to_string(max_imag / max_abs) + ")");
  std::vector<double> out(conv.size());
  for (std::size_t i = 0; i < conv.size(); ++i) out[i] = conv[i].real();
  return out;
}

GridField hartree_term(const GridField& u, const KernelSpec& kernel, int k) {
  const std::vector<double> W = hartree_potential(u, kernel, k);
  GridField out = u;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = W[i] * u.values[i];
  return out;
}

GridField power_nonlinearity(const GridField& u, int k, double sign) {
  if (k < 1) fail_usage("power_nonlinearity: k must be positive");
  GridField out = u;
  for (cplx& v : out.values) v *= sign * std::pow(std::norm(v), k);
  return out;
}

// ---------------------------------------------------------------------------
// Real-entire series
// ---------------------------------------------------------------------------

RealEntireSeries::RealEntireSeries(int degree, std::vector<cplx> dense)
    : deg_(degree), a_(std::move(dense)) {
  if (deg_ < 1) fail_usage("real entire series: degree must be >= 1");
  const std::size_t expect = std::size_t(deg_ + 1) * (deg_ + 1);
  if (a_.size() != expect) fail_usage("real entire series: coefficient array size mismatch");
  if (a_[0] != cplx{}) fail_usage("real entire series: F(0) must vanish (a_00 = 0)");
  for (int m = 0; m <= deg_; ++m)
    for (int n = 0; n <= deg_; ++n)
      if (m + n > deg_ && coeff(m, n) != cplx{})
        fail_usage("real entire series: coefficient beyond total degree");
}

RealEntireSeries RealEntireSeries::cubic(double sign) {
  // sign·|u|²u = sign·(s²+t²)(s+it)
  std::vector<cplx> a(16, cplx{});
  a[3 * 4 + 0] = sign;             // s³
  a[2 * 4 + 1] = cplx(0, sign);    // i s²t
  a[1 * 4 + 2] = sign;             // s t²
  a[0 * 4 + 3] = cplx(0, sign);    // i t³
  return RealEntireSeries(3, std::move(a));
}

cplx RealEntireSeries::eval(double s, double t) const {
  cplx acc = 0.0;
  double sm = 1.0;
  for (int m = 0; m <= deg_; ++m) {
    double tn = 1.0;
    for (int n = 0; n + m <= deg_; ++n) {
      const cplx c = coeff(m, n);
      if (c != cplx{}) acc += c * sm * tn;
      tn *= t;
    }
    sm *= s;
  }
  return acc;
}

RealEntireSeries RealEntireSeries::majorant() const {
  std::vector<cplx> a(a_.size());
  for (std::size_t i = 0; i < a_.size(); ++i) a[i] = std::abs(a_[i]);
  return RealEntireSeries(deg_, std::move(a));
}

RealEntireSeries RealEntireSeries::partial_s() const {
  std::vector<cplx> a(a_.size(), cplx{});
  for (int m = 1; m <= deg_; ++m)
    for (int n = 0; m + n <= deg_; ++n)
      a[std::size_t(m - 1) * (deg_ + 1) + n] = double(m) * coeff(m, n);
  return RealEntireSeries(deg_, std::move(a));
}

RealEntireSeries RealEntireSeries::partial_t() const {
  std::vector<cplx> a(a_.size(), cplx{});
  for (int m = 0; m <= deg_; ++m)
    for (int n = 1; m + n <= deg_; ++n)
      a[std::size_t(m) * (deg_ + 1) + (n - 1)] = double(n) * coeff(m, n);
  return RealEntireSeries(deg_, std::move(a));
}

double RealEntireSeries::top_shell(double s, double t) const {
  double acc = 0.0;
  for (int m = 0; m <= deg_; ++m) {
    const int n = deg_ - m;
    acc += std::abs(coeff(m, n)) * std::pow(std::abs(s), m) * std::pow(std::abs(t), n);
  }
  return acc;
}

GridField real_entire_apply(const RealEntireSeries& series, const GridField& u) {
  GridField out = u;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    out.values[i] = series.eval(u.values[i].real(), u.values[i].imag());
  return out;
}

std::pair<GridField, GridField> split_by_level(const GridField& f) {
  GridField g = f, h = f;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (std::abs(f.values[i]) > 1.0)
      h.values[i] = 0.0;
    else
      g.values[i] = 0.0;
  }
  return {g, h};
}

// ---------------------------------------------------------------------------
// HLS ratio
// ---------------------------------------------------------------------------

double hls_ratio(const GridField& f, double gamma, double p) {
  const int d = f.grid.dim;
  if (!(gamma > 0.0) || !(gamma < d)) fail_usage("hls_ratio: need 0 < gamma < d");
  if (!(p > 1.0)) fail_usage("hls_ratio: need p > 1");
  const double qinv = 1.0 / p + gamma / d - 1.0;
  if (!(qinv > 0.0))
    fail_usage("hls_ratio: exponent relation unsatisfiable (gamma >= d(1-1/p))");
  const double q = 1.0 / qinv;
  if (!(q > p)) fail_usage("hls_ratio: relation requires q > p");
  if (f.grid.axis.kind != RuleKind::uniform_box)
    fail_usage("hls_ratio: field must live on a uniform box");

  GridField conv = f;
  if (d == 1) {
    // direct convolution with exact cell integrals of |s|^{−γ}:
    // w(offset) = ∫_{offset−h/2}^{offset+h/2} |s|^{−γ} ds
    const int n = f.grid.axis.size();
    const double h = f.grid.axis.plain_weights[0];
    const double e = 1.0 - gamma;
    auto anti = [e](double s) { return (s >= 0 ? 1.0 : -1.0) * std::pow(std::abs(s), e) / e; };
    std::vector<double> w(2 * n - 1);
    for (int o = -(n - 1); o <= n - 1; ++o)
      w[o + n - 1] = anti(o * h + 0.5 * h) - anti(o * h - 0.5 * h);
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i) acc += w[j - i + n - 1] * f.values[i];
      conv.values[j] = acc;
    }
  } else {
    // DFT multiplier route; the ξ=0 bin takes the first-shell average value
    BoxTransform ft(d, f.grid.axis.size(), f.grid.axis.box_halfwidth);
    std::vector<cplx> spec = ft.forward(f.values);
    const double C = hartree_constant(d, gamma);
    std::vector<int> mi(d);
    const double dxi = kPi / ft.half_width();
    for (std::size_t idx = 0; idx < spec.size(); ++idx) {
      decode_index(idx, f.grid.axis.size(), d, mi.data());
      double r2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double xi = ft.frequency(mi[j]);
        r2 += xi * xi;
      }
      const double khat =
          (r2 == 0.0) ? C * std::pow(dxi, gamma - d) : C * std::pow(std::sqrt(r2), gamma - d);
      spec[idx] *= std::pow(2.0 * kPi, 0.5 * d) * khat;
    }
    conv.values = ft.inverse(spec);
  }
  const double denom = grid_lp(f, p);
  if (denom == 0.0) fail_usage("hls_ratio: zero field");
  return grid_lp(conv, q) / denom;
}

// ---------------------------------------------------------------------------
// Trilinear diagnostics
// ---------------------------------------------------------------------------

namespace {

void validate_trilinear_exponents(double p, double q, const KernelSpec& kernel, int dim) {
  if (const auto* hk = std::get_if<HartreeKernel>(&kernel)) {
    if (!(p >= 1.0 && p <= 2.0))
      fail_usage("trilinear_ratio: hartree kernel needs 1 <= p <= 2");
    if (!(q >= 1.0 && q < 2.0 * dim / (dim + hk->gamma)))
      fail_usage("trilinear_ratio: hartree kernel needs 1 <= q < 2d/(d+gamma)");
  } else if (std::holds_alternative<FourierMultiplierKernel>(kernel)) {
    if (!(p >= 1.0 && p <= 2.0 && q >= 1.0 && q <= 2.0))
      fail_usage("trilinear_ratio: multiplier kernel needs 1 <= p,q <= 2");
  } else {
    if (q != 1.0) fail_usage("trilinear_ratio: grid kernel needs q = 1");
  }
}

HermiteField nonlinear_product(const HermiteField& f, const KernelSpec& kernel,
                               const NormContext& ctx) {
  GridField u = synthesize(f, ctx.box);
  GridField w = hartree_term(u, kernel, 1);
  return analyze(w, ctx.product_cutoff);
}

}  // namespace

double trilinear_ratio(const HermiteField& f, double p, double q,
                       const KernelSpec& kernel, const NormContext& ctx) {
  validate_trilinear_exponents(p, q, kernel, f.dim);
  const double base = modulation_norm(f, p, q, ctx.lattice);
  if (base == 0.0) fail_usage("trilinear_ratio: zero field");
  const HermiteField prod = nonlinear_product(f, kernel, ctx);
  return modulation_norm(prod, p, q, ctx.lattice) / (base * base * base);
}

double trilinear_lipschitz_ratio(const HermiteField& f, const HermiteField& g,
                                 double p, double q, const KernelSpec& kernel,
                                 const NormContext& ctx) {
  validate_trilinear_exponents(p, q, kernel, f.dim);
  const double nf = modulation_norm(f, p, q, ctx.lattice);
  const double ng = modulation_norm(g, p, q, ctx.lattice);
  const double nfg = modulation_norm(f - g, p, q, ctx.lattice);
  if (nfg == 0.0) fail_usage("trilinear_lipschitz_ratio: identical fields");
  const HermiteField dprod = nonlinear_product(f, kernel, ctx) - nonlinear_product(g, kernel, ctx);
  return modulation_norm(dprod, p, q, ctx.lattice) / ((nf * nf + nf * ng + ng * ng) * nfg);
}

}  // namespace hermion
