#pragma once

#include <functional>

#include "hermion/hermite.hpp"

namespace hermion {

// Bounded function of the oscillator eigenvalues n = 2k+d, applied diagonally
// in Hermite coefficient space.
struct SpectralMultiplier {
  std::function<cplx(int)> rule;  // n ↦ m(n)
  double bound = 1.0;             // sup_k |m(2k+d)|

  static SpectralMultiplier identity();
  static SpectralMultiplier eigenvalue();                    // m(n) = n
  static SpectralMultiplier propagator(double t, int sign);  // m(n) = e^{i·sign·t·n}
  static SpectralMultiplier level_indicator(int k, int dim); // χ_{n = 2k+d}
  static SpectralMultiplier fourier(int dim);                // F Φ_α = (−i)^{|α|} Φ_α
};

// Output coefficient at α is m(2|α|+d)·c_α. The multiplier is evaluated once
// per eigenvalue level (d·(N−1)+1 distinct levels), not per index.
HermiteField apply_multiplier(const SpectralMultiplier& m, const HermiteField& f);

// Solution operator of i∂ₜu − Hu = 0 at time t: coefficients rotate by
// e^{−it(2|α|+d)}. sign=+1 selects the adjoint group e^{+itH}.
HermiteField evolve_linear(const HermiteField& f, double t, int sign = -1);

// Spectral projection onto the eigenspace |α| = k.
HermiteField projection(const HermiteField& f, int k);

// Energy form Σ (2|α|+d)|c_α|².
double oscillator_energy(const HermiteField& f);

}  // namespace hermion
