#include "hermion/propagator.hpp"

#include <cmath>
#include <limits>

namespace hermion {

SpectralMultiplier SpectralMultiplier::identity() {
  return {[](int) { return cplx(1.0, 0.0); }, 1.0};
}

SpectralMultiplier SpectralMultiplier::eigenvalue() {
  return {[](int n) { return cplx(double(n), 0.0); },
          std::numeric_limits<double>::infinity()};
}

SpectralMultiplier SpectralMultiplier::propagator(double t, int sign) {
  if (sign != 1 && sign != -1) fail_usage("propagator: sign must be ±1");
  return {[t, sign](int n) { return std::polar(1.0, sign * t * n); }, 1.0};
}

SpectralMultiplier SpectralMultiplier::level_indicator(int k, int dim) {
  const int target = 2 * k + dim;
  return {[target](int n) { return cplx(n == target ? 1.0 : 0.0, 0.0); }, 1.0};
}

SpectralMultiplier SpectralMultiplier::fourier(int dim) {
  return {[dim](int n) {
            static const cplx cycle[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
            return cycle[((n - dim) / 2) % 4];  // (−i)^{|α|}
          },
          1.0};
}

HermiteField apply_multiplier(const SpectralMultiplier& m, const HermiteField& f) {
  const int max_level = f.dim * (f.cutoff - 1);
  std::vector<cplx> values(static_cast<std::size_t>(max_level) + 1);
  std::vector<bool> ready(static_cast<std::size_t>(max_level) + 1, false);
  HermiteField out(f.dim, f.cutoff);
  for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx) {
    const int lvl = level_of(idx, f.cutoff, f.dim);
    if (!ready[lvl]) {
      values[lvl] = m.rule(2 * lvl + f.dim);
      ready[lvl] = true;
    }
    out.coeffs[idx] = values[lvl] * f.coeffs[idx];
  }
  return out;
}

HermiteField evolve_linear(const HermiteField& f, double t, int sign) {
  if (!std::isfinite(t)) fail_usage("evolve_linear: non-finite time");
  return apply_multiplier(SpectralMultiplier::propagator(t, sign), f);
}

HermiteField projection(const HermiteField& f, int k) {
  if (k < 0) fail_usage("projection: negative level");
  HermiteField out(f.dim, f.cutoff);
  for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx)
    if (level_of(idx, f.cutoff, f.dim) == k) out.coeffs[idx] = f.coeffs[idx];
  return out;
}

double oscillator_energy(const HermiteField& f) {
  double e = 0.0;
  for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx)
    e += (2.0 * level_of(idx, f.cutoff, f.dim) + f.dim) * std::norm(f.coeffs[idx]);
  return e;
}

}  // namespace hermion
