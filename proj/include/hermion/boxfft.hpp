#pragma once

#include "hermion/hermite.hpp"

namespace hermion {

// DFT bridge between box samples and the continuous unitary Fourier transform
// on the uniform grid x_i = −L + i·h, h = 2L/n, with frequencies ξ_m = πm/L,
// m ∈ [−n/2, n/2). Layout of the spectral array follows FFTW (m ≥ 0 first).
//
// forward:  out[m] = (2π)^{−d/2} h^d Σ_j in[j] e^{−i ξ_m · x_j}
// inverse:  out[j] = (2π)^{−d/2} (π/L)^d Σ_m in[m] e^{+i ξ_m · x_j}
// so inverse(forward(u)) = u up to roundoff.
class BoxTransform {
 public:
  BoxTransform(int dim, int points, double half_width);

  std::vector<cplx> forward(const std::vector<cplx>& values) const;
  std::vector<cplx> inverse(const std::vector<cplx>& spectrum) const;

  // Signed frequency of spectral bin index along one axis.
  double frequency(int bin) const;
  int points() const { return n_; }
  int dim() const { return d_; }
  double half_width() const { return L_; }

 private:
  std::vector<cplx> run(const std::vector<cplx>& in, int sign) const;
  int d_, n_;
  double L_;
};

}  // namespace hermion
