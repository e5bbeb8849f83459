#pragma once

#include <iosfwd>
#include <memory>

#include "hermion/hermite.hpp"

namespace hermion {

// ---------------------------------------------------------------------------
// Time–frequency sampling lattice. x is the translation variable, y the
// modulation variable; both axes run over [−extent, extent] in steps of
// `step` (so counts are odd and the origin is a lattice point). The window
// is the L²-normalized Gaussian g(t) = (πσ²)^{−1/4} e^{−t²/(2σ²)} per
// dimension, σ = window_width.
// ---------------------------------------------------------------------------
struct TFLattice {
  int dim = 1;
  double x_step = 0.25;
  double y_step = 0.25;
  double x_extent = 12.0;
  double y_extent = 12.0;
  double window_width = 1.0;
  double quad_step = 0.125;  // spatial quadrature step for the STFT integrals

  int x_count() const;
  int y_count() const;
  std::vector<double> x_points() const;
  std::vector<double> y_points() const;
  void validate() const;

  TFLattice refined(double factor = 0.5) const;  // scale both steps
};

// Sampled transform over the lattice. Entries are stored pair-major:
// index = Σ_j pair_j · (nx·ny)^{d−1−j} with pair_j = ix_j·ny + iy_j,
// which for d=1 is the plain (ix, iy) row-major table.
struct STFTTable {
  TFLattice lat;
  int nx = 0, ny = 0;
  std::vector<cplx> vals;

  cplx at(int ix, int iy) const { return vals[std::size_t(ix) * ny + iy]; }  // d=1
  // Largest |entry| on the lattice boundary relative to the global maximum;
  // extents are flagged insufficient when this exceeds 1e−10.
  double boundary_ratio() const;
  bool boundary_ok() const { return boundary_ratio() <= 1e-10; }
};

// Per-mode 1D transform tables; building them once makes every field's table
// a cheap contraction Σ_α c_α Π_j T_{α_j}(x_j, y_j). `wigner` selects the
// table of ⟨π(x+iy)h_k, h_0⟩ instead of V_g h_k.
class ModeTableCache {
 public:
  ModeTableCache(const TFLattice& lat, int cutoff, bool wigner);

  const TFLattice& lattice() const { return lat_; }
  int cutoff() const { return cutoff_; }
  cplx table(int k, int ix, int iy) const {
    return tables_[(std::size_t(k) * nx_ + ix) * ny_ + iy];
  }

 private:
  TFLattice lat_;
  int cutoff_, nx_, ny_;
  std::vector<cplx> tables_;
};

// V_g f(x,y) = (2π)^{−d/2} ∫ f(t) conj(g(t−x)) e^{−iy·t} dt on the lattice.
STFTTable stft(const HermiteField& f, const TFLattice& lat);
STFTTable stft(const GridField& f, const TFLattice& lat, int cutoff);
STFTTable stft_cached(const HermiteField& f, const ModeTableCache& cache);

// F(x,y) = ⟨π(x+iy)f, Φ_0⟩ = ∫ e^{i(x·ξ + x·y/2)} f(ξ+y) Φ_0(ξ) dξ.
// Note F(0,0) = ‖f‖² for f = Φ_0; the (2π)^{−d/2} Fourier–Wigner prefactor is
// applied by mpp_norm_via_wigner, not stored in the table.
STFTTable fourier_wigner(const HermiteField& f, const TFLattice& lat);
STFTTable fourier_wigner_cached(const HermiteField& f, const ModeTableCache& cache);

// Mixed norm ‖ ‖T(x,y)‖_{L^p_x} ‖_{L^q_y} with Riemann weights x_step^{d/p},
// y_step^{d/q}; p or q = ∞ is the lattice maximum.
double mixed_norm_x_then_y(const STFTTable& table, double p, double q);
// Same with the y-norm innermost (used by the Fourier–Wigner route).
double mixed_norm_y_then_x(const STFTTable& table, double q, double p);

double modulation_norm(const HermiteField& f, double p, double q, const TFLattice& lat);
double modulation_norm(const HermiteField& f, double p, double q, const ModeTableCache& cache);
double modulation_norm(const GridField& f, double p, double q, const TFLattice& lat, int cutoff);

// ‖(2π)^{−d/2} F‖ mixed norm over the Fourier–Wigner table; equals the
// modulation norm for p = q (cross-validated to 1e−6 in the test suite).
double mpp_norm_via_wigner(const HermiteField& f, double p, double q, const TFLattice& lat);
double mpp_norm_via_wigner(const HermiteField& f, double p, double q, const ModeTableCache& cache);

// Closed form Φ_{α,0}(z) = (2π)^{−d/2} (α!)^{−1/2} (i/√2)^{|α|} z̄^α e^{−|z|²/4},
// evaluated with log-domain magnitudes (safe for |α| ≤ 150).
cplx special_hermite(std::span<const int> alpha, std::span<const cplx> z);

// Diagnostic sup of target-norm/source-norm ratios over a field family.
struct NormSpace {
  bool modulation = false;  // false → Lebesgue L^p (q ignored)
  double p = 2.0, q = 2.0;
  std::string label() const;
};
struct EmbeddingRow {
  NormSpace source, target;
  double sup_ratio;
};
std::vector<EmbeddingRow> embedding_ratio_report(
    const std::vector<HermiteField>& family,
    const std::vector<std::pair<NormSpace, NormSpace>>& spaces,
    const TFLattice& lat, const TensorGrid& grid);

// Exporters: CSV columns x_1..x_d, y_1..y_d, re, im; binary layout documented
// in the README (magic "HERMION1").
void write_table_csv(const STFTTable& table, std::ostream& os);
void write_table_bin(const STFTTable& table, std::ostream& os);

}  // namespace hermion
