#pragma once

#include "hermion/hermite.hpp"

namespace hermion {

inline double rel_l2_error(const HermiteField& got, const HermiteField& want) {
  const double base = want.l2_norm();
  return base == 0.0 ? l2_distance(got, want) : l2_distance(got, want) / base;
}

inline HermiteField random_field(std::uint64_t seed, int dim, int cutoff,
                                 double norm = 1.0) {
  GaussianRng rng(seed);
  HermiteField f(dim, cutoff);
  for (cplx& c : f.coeffs) c = cplx(rng.normal(), rng.normal());
  const double n = f.l2_norm();
  for (cplx& c : f.coeffs) c *= norm / n;
  return f;
}

}  // namespace hermion
