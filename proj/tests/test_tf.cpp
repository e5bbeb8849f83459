#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hermion/propagator.hpp"
#include "hermion/tf.hpp"
#include "test_utils.hpp"

using namespace hermion;

namespace {

TFLattice small_lattice() {
  TFLattice lat;
  lat.x_extent = lat.y_extent = 8.0;
  lat.x_step = lat.y_step = 0.25;
  return lat;
}

}  // namespace

TEST_CASE("window has unit L2 norm under the spatial quadrature") {
  for (double sigma : {1.0, 1.3}) {
    const double h = 0.125;
    double acc = 0.0;
    const double amp = std::pow(M_PI * sigma * sigma, -0.25);
    for (double t = -20.0; t <= 20.0; t += h) {
      const double g = amp * std::exp(-0.5 * t * t / (sigma * sigma));
      acc += h * g * g;
    }
    CHECK(std::abs(acc - 1.0) < 1e-12);
  }
}

TEST_CASE("stft of the window itself at the origin") {
  TFLattice lat = small_lattice();
  HermiteField e0 = HermiteField::basis(1, 4, std::vector<int>{0});
  const STFTTable V = stft(e0, lat);
  const int cx = (V.nx - 1) / 2, cy = (V.ny - 1) / 2;
  CHECK(std::abs(V.at(cx, cy) - cplx(std::pow(2.0 * M_PI, -0.5), 0.0)) < 1e-10);
  CHECK(stft(e0, TFLattice{}).boundary_ok());  // the default extent-12 lattice decays enough
}

TEST_CASE("stft of zero is zero") {
  const STFTTable V = stft(HermiteField(1, 4), small_lattice());
  for (const cplx& v : V.vals) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("stft matches a refined-quadrature oracle") {
  TFLattice lat = small_lattice();
  TFLattice fine = lat;
  fine.quad_step = lat.quad_step / 4.0;  // 4x spatial resolution as the oracle
  HermiteField f(1, 6);
  f.coeffs[0] = 0.8;
  f.coeffs[3] = cplx(0.0, 0.6);
  const STFTTable a = stft(f, lat);
  const STFTTable b = stft(f, fine);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.vals.size(); ++i)
    worst = std::max(worst, std::abs(a.vals[i] - b.vals[i]));
  CHECK(worst < 1e-8);
}

TEST_CASE("conjugate symmetry for real fields and real window") {
  TFLattice lat = small_lattice();
  HermiteField f(1, 5);
  f.coeffs[0] = 0.5;
  f.coeffs[2] = 1.25;  // real coefficients => real function
  const STFTTable V = stft(f, lat);
  double worst = 0.0;
  for (int ix = 0; ix < V.nx; ++ix)
    for (int iy = 0; iy < V.ny; ++iy)
      worst = std::max(worst,
                       std::abs(V.at(ix, V.ny - 1 - iy) - std::conj(V.at(ix, iy))));
  CHECK(worst < 1e-12);
}

TEST_CASE("modulation norm basics") {
  TFLattice lat = small_lattice();
  CHECK(modulation_norm(HermiteField(1, 4), 2.0, 2.0, lat) == 0.0);

  const HermiteField f = random_field(41, 1, 12);
  const HermiteField g = random_field(43, 1, 12);
  // homogeneity is exact
  const double n1 = modulation_norm(f, 1.5, 2.5, lat);
  const double n2 = modulation_norm(cplx(2.0, 0.0) * f, 1.5, 2.5, lat);
  CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-13));
  // triangle inequality
  CHECK(modulation_norm(f + g, 1.0, 2.0, lat) <=
        modulation_norm(f, 1.0, 2.0, lat) + modulation_norm(g, 1.0, 2.0, lat) + 1e-10);
  // infinity exponents are lattice maxima
  const STFTTable V = stft(f, lat);
  double vmax = 0.0;
  for (const cplx& v : V.vals) vmax = std::max(vmax, std::abs(v));
  const double inf_inf = modulation_norm(f, std::numeric_limits<double>::infinity(),
                                         std::numeric_limits<double>::infinity(), lat);
  CHECK(inf_inf == doctest::Approx(vmax).epsilon(1e-13));
}

TEST_CASE("Moyal identity: M^{2,2} equals the L2 norm") {
  TFLattice lat;  // default extent 12
  for (std::uint64_t seed : {47u, 53u, 59u}) {
    const HermiteField f = random_field(seed, 1, 24, 1.7);
    CHECK(std::abs(modulation_norm(f, 2.0, 2.0, lat) - f.l2_norm()) < 1e-6 * f.l2_norm());
  }
}

TEST_CASE("complex conjugation leaves modulation norms unchanged") {
  TFLattice lat = small_lattice();
  const HermiteField f = random_field(61, 1, 12);
  HermiteField fbar = f;
  for (cplx& c : fbar.coeffs) c = std::conj(c);
  // conj in coefficient space equals conjugating the function: h_k real
  for (auto [p, q] : {std::pair{1.0, 2.0}, {2.0, 2.0}, {3.0, 1.0}}) {
    const double a = modulation_norm(f, p, q, lat);
    const double b = modulation_norm(fbar, p, q, lat);
    CHECK(std::abs(a - b) <= 1e-10 * a);
  }
}

TEST_CASE("Fourier transform is an M^{p,p} isometry with the Gaussian window") {
  TFLattice lat;  // full default lattice, symmetric
  const HermiteField f = random_field(67, 1, 20);
  const HermiteField fhat = apply_multiplier(SpectralMultiplier::fourier(1), f);
  for (double p : {1.0, 2.0}) {
    const double a = modulation_norm(f, p, p, lat);
    const double b = modulation_norm(fhat, p, p, lat);
    CHECK(std::abs(a - b) <= 1e-6 * a);
  }
}

TEST_CASE("refinement changes a converged norm by less than 0.1%") {
  TFLattice lat;  // defaults
  const HermiteField f = random_field(71, 1, 16);
  const double a = modulation_norm(f, 1.0, 1.0, lat);
  const double b = modulation_norm(f, 1.0, 1.0, lat.refined(0.5));
  CHECK(std::abs(a - b) <= 1e-3 * a);
}

TEST_CASE("fourier_wigner at the origin and closed-form match") {
  TFLattice lat = small_lattice();
  HermiteField e0 = HermiteField::basis(1, 5, std::vector<int>{0});
  const STFTTable F = fourier_wigner(e0, lat);
  const int cx = (F.nx - 1) / 2, cy = (F.ny - 1) / 2;
  CHECK(std::abs(F.at(cx, cy) - cplx(1.0, 0.0)) < 1e-10);  // <Phi_0, Phi_0> = 1

  // every basis mode matches (2π)^{d/2} Φ_{α,0}(x+iy)
  const auto xs = lat.x_points();
  const auto ys = lat.y_points();
  for (int a = 0; a < 5; ++a) {
    HermiteField f(1, 5);
    f.coeffs[a] = 1.0;
    const STFTTable W = fourier_wigner(f, lat);
    double worst = 0.0;
    for (int ix = 0; ix < W.nx; ++ix)
      for (int iy = 0; iy < W.ny; ++iy) {
        const cplx z(xs[ix], ys[iy]);
        const int alpha[1] = {a};
        const cplx closed =
            std::pow(2.0 * M_PI, 0.5) * special_hermite(alpha, std::span(&z, 1));
        worst = std::max(worst, std::abs(W.at(ix, iy) - closed));
      }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("wigner route equals the stft route after (x,y) -> (y,-x)") {
  TFLattice lat = small_lattice();
  HermiteField f(1, 6);
  f.coeffs[0] = 1.0;
  f.coeffs[2] = cplx(0.0, 1.0);
  const STFTTable V = stft(f, lat);
  const STFTTable W = fourier_wigner(f, lat);
  const auto xs = lat.x_points();
  const auto ys = lat.y_points();
  const double pref = std::pow(2.0 * M_PI, -0.5);
  double worst = 0.0;
  for (int ix = 0; ix < W.nx; ++ix)
    for (int iy = 0; iy < W.ny; ++iy) {
      const cplx lhs = pref * W.at(ix, iy);
      const cplx rhs = std::polar(1.0, -0.5 * xs[ix] * ys[iy]) * V.at(iy, W.nx - 1 - ix);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("special_hermite closed-form properties") {
  const cplx z0{};
  const int a0[1] = {0};
  CHECK(std::abs(special_hermite(a0, std::span(&z0, 1)) -
                 cplx(std::pow(2.0 * M_PI, -0.5), 0.0)) < 1e-15);
  const int a2[1] = {2};
  CHECK(std::abs(special_hermite(a2, std::span(&z0, 1))) == 0.0);
  // large |α| stays finite through the log-domain route
  const int big[1] = {140};
  const cplx zb{9.0, -7.0};
  const cplx v = special_hermite(big, std::span(&zb, 1));
  CHECK(std::isfinite(std::abs(v)));
}

TEST_CASE("mpp_norm_via_wigner agrees with the modulation norm") {
  TFLattice lat = small_lattice();
  HermiteField e0 = HermiteField::basis(1, 4, std::vector<int>{0});
  CHECK(mpp_norm_via_wigner(e0, 2.0, 2.0, lat) ==
        doctest::Approx(modulation_norm(e0, 2.0, 2.0, lat)).epsilon(1e-6));
  CHECK(mpp_norm_via_wigner(HermiteField(1, 4), 1.0, 1.0, lat) == 0.0);

  HermiteField mix(1, 4);
  mix.coeffs[0] = mix.coeffs[1] = 1.0;
  const double a = mpp_norm_via_wigner(mix, 1.0, 1.0, lat);
  const double b = modulation_norm(mix, 1.0, 1.0, lat);
  CHECK(std::abs(a - b) <= 1e-6 * b);
}

TEST_CASE("two dimensional stft sanity") {
  TFLattice lat;
  lat.dim = 2;
  lat.x_extent = lat.y_extent = 6.0;
  lat.x_step = lat.y_step = 0.5;
  HermiteField e00 = HermiteField::basis(2, 3, std::vector<int>{0, 0});
  const STFTTable V = stft(e00, lat);
  // center entry: (2π)^{-1} ||g||^4-style normalization for d=2
  const int n = lat.x_count();
  const std::size_t pair = std::size_t((n - 1) / 2) * lat.y_count() + (n - 1) / 2;
  const std::size_t center = pair * (std::size_t(V.nx) * V.ny) + pair;
  CHECK(std::abs(V.vals[center] - cplx(1.0 / (2.0 * M_PI), 0.0)) < 1e-9);
  // Moyal in d=2 on the (coarser) lattice
  const double m22 = mixed_norm_x_then_y(V, 2.0, 2.0);
  CHECK(std::abs(m22 - 1.0) < 1e-6);
}

TEST_CASE("grid-sampled input goes through the analyze route") {
  TFLattice lat = small_lattice();
  const HermiteField f = random_field(73, 1, 10);
  const TensorGrid grid{1, gauss_hermite_rule(24)};
  const GridField u = synthesize(f, grid);
  const STFTTable a = stft(f, lat);
  const STFTTable b = stft(u, lat, 10);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.vals.size(); ++i)
    worst = std::max(worst, std::abs(a.vals[i] - b.vals[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("two dimensional isometry spot check") {
  TFLattice lat;
  lat.dim = 2;
  lat.x_extent = lat.y_extent = 7.0;
  lat.x_step = lat.y_step = 0.5;
  const HermiteField f = random_field(79, 2, 6);
  ModeTableCache cache(lat, 6, false);
  const HermiteField g = evolve_linear(f, 0.7);
  for (double p : {1.0, 2.0}) {
    const double a = mixed_norm_x_then_y(stft_cached(f, cache), p, p);
    const double b = mixed_norm_x_then_y(stft_cached(g, cache), p, p);
    CHECK(std::abs(a - b) <= 1e-2 * a);  // coarse lattice, so a coarse gate
  }
}

TEST_CASE("insufficient extent is flagged") {
  TFLattice lat;
  lat.x_extent = lat.y_extent = 3.0;
  lat.x_step = lat.y_step = 0.25;
  const STFTTable V = stft(HermiteField::basis(1, 4, std::vector<int>{0}), lat);
  CHECK_FALSE(V.boundary_ok());
}

TEST_CASE("embedding report rows are finite and scale invariant") {
  TFLattice lat = small_lattice();
  const TensorGrid grid{1, gauss_hermite_rule(32)};
  HermiteField e0 = HermiteField::basis(1, 8, std::vector<int>{0});
  NormSpace l2{false, 2.0, 2.0}, m21{true, 2.0, 1.0};
  const auto rows = embedding_ratio_report({e0}, {{m21, l2}}, lat, grid);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].sup_ratio > 0.0);
  CHECK(std::isfinite(rows[0].sup_ratio));
  const auto rows2 =
      embedding_ratio_report({cplx(2.0, 0.0) * e0}, {{m21, l2}}, lat, grid);
  CHECK(rows2[0].sup_ratio == doctest::Approx(rows[0].sup_ratio).epsilon(1e-12));
  CHECK_THROWS_AS((void)embedding_ratio_report({}, {{m21, l2}}, lat, grid), Error);
}

TEST_CASE("table exporters") {
  TFLattice lat = small_lattice();
  const STFTTable V = stft(HermiteField::basis(1, 4, std::vector<int>{0}), lat);
  std::ostringstream csv;
  write_table_csv(V, csv);
  const std::string text = csv.str();
  CHECK(text.substr(0, 11) == "x1,y1,re,im");
  std::size_t lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == std::size_t(V.nx) * V.ny + 1);

  std::ostringstream bin(std::ios::binary);
  write_table_bin(V, bin);
  const std::string blob = bin.str();
  CHECK(blob.size() == 8 + 4 + 4 + 32 + V.vals.size() * 16);
  CHECK(blob.substr(0, 8) == "HERMION1");
}

TEST_CASE("lattice validation") {
  TFLattice bad;
  bad.x_step = 3.0;
  bad.x_extent = 2.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  TFLattice coarse;
  coarse.x_step = coarse.y_step = 2.0;
  coarse.x_extent = coarse.y_extent = 6.0;  // only 7 points per axis
  CHECK_THROWS_AS(coarse.validate(), Error);
}
