#include "hermion/tf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ostream>

namespace hermion {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

int axis_count(double extent, double step) {
  return 2 * static_cast<int>(std::floor(extent / step + 0.5)) + 1;
}

std::vector<double> axis_points(double extent, double step) {
  const int n = axis_count(extent, step);
  const int half = (n - 1) / 2;
  std::vector<double> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = (i - half) * step;
  return pts;
}
}  // namespace

int TFLattice::x_count() const { return axis_count(x_extent, x_step); }
int TFLattice::y_count() const { return axis_count(y_extent, y_step); }
std::vector<double> TFLattice::x_points() const { return axis_points(x_extent, x_step); }
std::vector<double> TFLattice::y_points() const { return axis_points(y_extent, y_step); }

void TFLattice::validate() const {
  if (dim < 1) fail_usage("lattice: dim must be positive");
  if (x_step <= 0 || y_step <= 0 || x_extent <= 0 || y_extent <= 0)
    fail_usage("lattice: steps and extents must be positive");
  if (x_step >= x_extent || y_step >= y_extent)
    fail_usage("lattice: step must be smaller than extent");
  if (x_count() < 8 || y_count() < 8) fail_usage("lattice: need at least 8 points per axis");
  if (window_width <= 0) fail_usage("lattice: window width must be positive");
  if (quad_step <= 0) fail_usage("lattice: quadrature step must be positive");
}

TFLattice TFLattice::refined(double factor) const {
  TFLattice r = *this;
  r.x_step *= factor;
  r.y_step *= factor;
  return r;
}

double STFTTable::boundary_ratio() const {
  const int d = lat.dim;
  const std::size_t pair_count = std::size_t(nx) * ny;
  double global = 0.0, boundary = 0.0;
  std::vector<int> pair(d);
  for (std::size_t idx = 0; idx < vals.size(); ++idx) {
    const double a = std::abs(vals[idx]);
    global = std::max(global, a);
    std::size_t rest = idx;
    bool on_boundary = false;
    for (int j = d - 1; j >= 0; --j) {
      const int p = static_cast<int>(rest % pair_count);
      rest /= pair_count;
      const int ix = p / ny, iy = p % ny;
      if (ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1) on_boundary = true;
    }
    if (on_boundary) boundary = std::max(boundary, a);
  }
  if (global == 0.0) return 0.0;
  return boundary / global;
}

// ---------------------------------------------------------------------------
// Mode tables
// ---------------------------------------------------------------------------

ModeTableCache::ModeTableCache(const TFLattice& lat, int cutoff, bool wigner)
    : lat_(lat), cutoff_(cutoff), nx_(lat.x_count()), ny_(lat.y_count()) {
  lat.validate();
  if (cutoff < 1) fail_usage("mode tables: cutoff must be positive");
  const auto xs = lat.x_points();
  const auto ys = lat.y_points();
  const double sigma = lat.window_width;
  const double ht = lat.quad_step;

  tables_.assign(std::size_t(cutoff) * nx_ * ny_, cplx{});

  if (!wigner) {
    // V_g h_k(x,y): quadrature over t in [−t_half, t_half]; the window limits
    // the effective support to |t−x| ≤ 9σ.
    const double t_half = lat.x_extent + 9.0 * sigma;
    const int nt = static_cast<int>(std::ceil(2.0 * t_half / ht)) + 1;
    std::vector<double> t(nt), gv(nt);
    for (int i = 0; i < nt; ++i) t[i] = -t_half + 2.0 * t_half * i / (nt - 1);
    const double dt = t[1] - t[0];
    std::vector<double> H(std::size_t(cutoff) * nt);
    std::vector<double> col(cutoff);
    for (int i = 0; i < nt; ++i) {
      hermite_values(cutoff, t[i], col.data());
      for (int k = 0; k < cutoff; ++k) H[std::size_t(k) * nt + i] = col[k];
    }
    const double gnorm = std::pow(kPi * sigma * sigma, -0.25);
    const double scale = std::pow(kTwoPi, -0.5) * dt;
    std::vector<cplx> phase(nt);
    for (int ix = 0; ix < nx_; ++ix) {
      const double x = xs[ix];
      int i0 = std::max(0, static_cast<int>(std::floor((x - 9.0 * sigma + t_half) / dt)));
      int i1 = std::min(nt - 1, static_cast<int>(std::ceil((x + 9.0 * sigma + t_half) / dt)));
      for (int i = i0; i <= i1; ++i) {
        const double u = (t[i] - x) / sigma;
        gv[i] = gnorm * std::exp(-0.5 * u * u);
      }
      for (int iy = 0; iy < ny_; ++iy) {
        const double y = ys[iy];
        for (int i = i0; i <= i1; ++i) phase[i] = std::polar(1.0, -y * t[i]);
        for (int k = 0; k < cutoff; ++k) {
          const double* hk = H.data() + std::size_t(k) * nt;
          cplx acc = 0.0;
          for (int i = i0; i <= i1; ++i) acc += hk[i] * gv[i] * phase[i];
          tables_[(std::size_t(k) * nx_ + ix) * ny_ + iy] = scale * acc;
        }
      }
    }
  } else {
    // ⟨π(x+iy)h_k, h_0⟩ = e^{ixy/2} ∫ e^{ixξ} h_k(ξ+y) h_0(ξ) dξ; h_0 confines
    // the integration to |ξ| ≤ ~10 regardless of y.
    const double xi_half = 10.0;
    const int nxi = static_cast<int>(std::ceil(2.0 * xi_half / ht)) + 1;
    std::vector<double> xi(nxi), h0(nxi);
    for (int i = 0; i < nxi; ++i) xi[i] = -xi_half + 2.0 * xi_half * i / (nxi - 1);
    const double dxi = xi[1] - xi[0];
    for (int i = 0; i < nxi; ++i) h0[i] = hermite_1d(0, xi[i]);
    std::vector<double> Hs(std::size_t(cutoff) * nxi);
    std::vector<double> col(cutoff);
    std::vector<cplx> phase(nxi);
    for (int iy = 0; iy < ny_; ++iy) {
      const double y = ys[iy];
      for (int i = 0; i < nxi; ++i) {
        hermite_values(cutoff, xi[i] + y, col.data());
        for (int k = 0; k < cutoff; ++k) Hs[std::size_t(k) * nxi + i] = col[k];
      }
      for (int ix = 0; ix < nx_; ++ix) {
        const double x = xs[ix];
        for (int i = 0; i < nxi; ++i) phase[i] = std::polar(1.0, x * xi[i]);
        const cplx half_phase = std::polar(1.0, 0.5 * x * y);
        for (int k = 0; k < cutoff; ++k) {
          const double* hk = Hs.data() + std::size_t(k) * nxi;
          cplx acc = 0.0;
          for (int i = 0; i < nxi; ++i) acc += hk[i] * h0[i] * phase[i];
          tables_[(std::size_t(k) * nx_ + ix) * ny_ + iy] = half_phase * dxi * acc;
        }
      }
    }
  }
}

namespace {

STFTTable contract(const HermiteField& f, const ModeTableCache& cache) {
  const TFLattice& lat = cache.lattice();
  if (lat.dim != f.dim) fail_usage("stft: lattice/field dimension mismatch");
  if (f.cutoff > cache.cutoff()) fail_usage("stft: cache cutoff too small for field");
  STFTTable out;
  out.lat = lat;
  out.nx = lat.x_count();
  out.ny = lat.y_count();
  const std::size_t pair_count = std::size_t(out.nx) * out.ny;
  const std::size_t total = pow_size(static_cast<int>(pair_count), f.dim);
  out.vals.assign(total, cplx{});

  if (f.dim == 1) {
    for (int k = 0; k < f.cutoff; ++k) {
      const cplx c = f.coeffs[k];
      if (c == cplx{}) continue;
      for (int ix = 0; ix < out.nx; ++ix)
        for (int iy = 0; iy < out.ny; ++iy)
          out.vals[std::size_t(ix) * out.ny + iy] += c * cache.table(k, ix, iy);
    }
    return out;
  }

  // d ≥ 2: per-index product of 1D tables. Lattices this large are expected
  // to be small (validated by the caller via extents/steps).
  std::vector<int> alpha(f.dim), pair(f.dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int j = f.dim - 1; j >= 0; --j) {
      pair[j] = static_cast<int>(rest % pair_count);
      rest /= pair_count;
    }
    cplx acc = 0.0;
    for (std::size_t ci = 0; ci < f.coeffs.size(); ++ci) {
      const cplx c = f.coeffs[ci];
      if (c == cplx{}) continue;
      decode_index(ci, f.cutoff, f.dim, alpha.data());
      cplx prod = c;
      for (int j = 0; j < f.dim; ++j)
        prod *= cache.table(alpha[j], pair[j] / out.ny, pair[j] % out.ny);
      acc += prod;
    }
    out.vals[idx] = acc;
  }
  return out;
}

}  // namespace

STFTTable stft_cached(const HermiteField& f, const ModeTableCache& cache) {
  return contract(f, cache);
}

STFTTable stft(const HermiteField& f, const TFLattice& lat) {
  ModeTableCache cache(lat, f.cutoff, /*wigner=*/false);
  return contract(f, cache);
}

STFTTable stft(const GridField& f, const TFLattice& lat, int cutoff) {
  return stft(analyze(f, cutoff), lat);
}

STFTTable fourier_wigner_cached(const HermiteField& f, const ModeTableCache& cache) {
  return contract(f, cache);
}

STFTTable fourier_wigner(const HermiteField& f, const TFLattice& lat) {
  ModeTableCache cache(lat, f.cutoff, /*wigner=*/true);
  return contract(f, cache);
}

// ---------------------------------------------------------------------------
// Mixed norms
// ---------------------------------------------------------------------------

namespace {

double safe_root(double s, double e) { return s <= 0.0 ? 0.0 : std::pow(s, e); }

// Generic mixed norm: inner exponent over the axis selected by `inner_is_x`.
double mixed_norm_impl(const STFTTable& table, double inner_p, double outer_q,
                       bool inner_is_x) {
  if (inner_p < 1.0 || outer_q < 1.0) fail_usage("mixed norm: exponents must be >= 1");
  const int d = table.lat.dim;
  const int nx = table.nx, ny = table.ny;
  const std::size_t pair_count = std::size_t(nx) * ny;
  const std::size_t inner_count = pow_size(inner_is_x ? nx : ny, d);
  const std::size_t outer_count = pow_size(inner_is_x ? ny : nx, d);
  const double inner_step = inner_is_x ? table.lat.x_step : table.lat.y_step;
  const double outer_step = inner_is_x ? table.lat.y_step : table.lat.x_step;
  const bool inner_inf = std::isinf(inner_p);
  const bool outer_inf = std::isinf(outer_q);

  const int n_inner_axis = inner_is_x ? nx : ny;
  const int n_outer_axis = inner_is_x ? ny : nx;

  std::vector<int> in_idx(d), out_idx(d);
  double outer_acc = 0.0;
  for (std::size_t o = 0; o < outer_count; ++o) {
    std::size_t rest = o;
    for (int j = d - 1; j >= 0; --j) {
      out_idx[j] = static_cast<int>(rest % n_outer_axis);
      rest /= n_outer_axis;
    }
    double inner_acc = 0.0;
    for (std::size_t in = 0; in < inner_count; ++in) {
      rest = in;
      for (int j = d - 1; j >= 0; --j) {
        in_idx[j] = static_cast<int>(rest % n_inner_axis);
        rest /= n_inner_axis;
      }
      std::size_t idx = 0;
      for (int j = 0; j < d; ++j) {
        const int ix = inner_is_x ? in_idx[j] : out_idx[j];
        const int iy = inner_is_x ? out_idx[j] : in_idx[j];
        idx = idx * pair_count + (std::size_t(ix) * ny + iy);
      }
      const double a = std::abs(table.vals[idx]);
      if (inner_inf)
        inner_acc = std::max(inner_acc, a);
      else
        inner_acc += std::pow(a, inner_p);
    }
    double inner_norm = inner_inf
        ? inner_acc
        : safe_root(inner_acc, 1.0 / inner_p) * std::pow(inner_step, d / inner_p);
    if (outer_inf)
      outer_acc = std::max(outer_acc, inner_norm);
    else
      outer_acc += std::pow(inner_norm, outer_q);
  }
  return outer_inf ? outer_acc
                   : safe_root(outer_acc, 1.0 / outer_q) * std::pow(outer_step, d / outer_q);
}

}  // namespace

double mixed_norm_x_then_y(const STFTTable& table, double p, double q) {
  return mixed_norm_impl(table, p, q, /*inner_is_x=*/true);
}

double mixed_norm_y_then_x(const STFTTable& table, double q, double p) {
  return mixed_norm_impl(table, q, p, /*inner_is_x=*/false);
}

double modulation_norm(const HermiteField& f, double p, double q, const TFLattice& lat) {
  return mixed_norm_x_then_y(stft(f, lat), p, q);
}

double modulation_norm(const HermiteField& f, double p, double q, const ModeTableCache& cache) {
  return mixed_norm_x_then_y(stft_cached(f, cache), p, q);
}

double modulation_norm(const GridField& f, double p, double q, const TFLattice& lat, int cutoff) {
  return mixed_norm_x_then_y(stft(f, lat, cutoff), p, q);
}

double mpp_norm_via_wigner(const HermiteField& f, double p, double q, const TFLattice& lat) {
  ModeTableCache cache(lat, f.cutoff, /*wigner=*/true);
  return mpp_norm_via_wigner(f, p, q, cache);
}

double mpp_norm_via_wigner(const HermiteField& f, double p, double q,
                           const ModeTableCache& cache) {
  const STFTTable table = fourier_wigner_cached(f, cache);
  const double prefactor = std::pow(kTwoPi, -0.5 * table.lat.dim);
  return prefactor * mixed_norm_y_then_x(table, q, p);
}

// ---------------------------------------------------------------------------
// Special Hermite functions
// ---------------------------------------------------------------------------

cplx special_hermite(std::span<const int> alpha, std::span<const cplx> z) {
  if (alpha.size() != z.size()) fail_usage("special_hermite: dimension mismatch");
  const int d = static_cast<int>(alpha.size());
  int total = 0;
  double log_mag = -0.5 * d * std::log(kTwoPi);
  double arg = 0.0;
  double z2 = 0.0;
  for (int j = 0; j < d; ++j) {
    const int a = alpha[j];
    if (a < 0) fail_usage("special_hermite: negative index");
    total += a;
    z2 += std::norm(z[j]);
    if (a > 0) {
      const double r = std::abs(z[j]);
      if (r == 0.0) return cplx{};  // z̄^α vanishes
      log_mag += a * std::log(r);
      arg -= a * std::arg(z[j]);  // conjugate power
      log_mag -= 0.5 * std::lgamma(double(a) + 1.0);
    }
  }
  log_mag -= 0.5 * total * std::log(2.0);  // 2^{−|α|/2}
  log_mag -= 0.25 * z2;
  arg += 0.5 * kPi * total;  // i^{|α|}
  return std::polar(std::exp(log_mag), arg);
}

// ---------------------------------------------------------------------------
// Embedding report
// ---------------------------------------------------------------------------

std::string NormSpace::label() const {
  auto fmt = [](double v) {
    if (std::isinf(v)) return std::string("inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  if (modulation) return "M^{" + fmt(p) + "," + fmt(q) + "}";
  return "L^" + fmt(p);
}

std::vector<EmbeddingRow> embedding_ratio_report(
    const std::vector<HermiteField>& family,
    const std::vector<std::pair<NormSpace, NormSpace>>& spaces,
    const TFLattice& lat, const TensorGrid& grid) {
  if (family.empty()) fail_usage("embedding_ratio_report: empty family");
  std::vector<EmbeddingRow> rows;
  for (const auto& [src, tgt] : spaces) {
    double sup = 0.0;
    for (const HermiteField& f : family) {
      auto norm_in = [&](const NormSpace& s) {
        if (s.modulation) return modulation_norm(f, s.p, s.q, lat);
        return grid_lp(synthesize(f, grid), s.p);
      };
      const double denom = norm_in(src);
      if (denom > 0) sup = std::max(sup, norm_in(tgt) / denom);
    }
    rows.push_back({src, tgt, sup});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Exporters
// ---------------------------------------------------------------------------

void write_table_csv(const STFTTable& table, std::ostream& os) {
  const int d = table.lat.dim;
  const auto xs = table.lat.x_points();
  const auto ys = table.lat.y_points();
  for (int j = 0; j < d; ++j) os << "x" << (j + 1) << ",";
  for (int j = 0; j < d; ++j) os << "y" << (j + 1) << ",";
  os << "re,im\n";
  const std::size_t pair_count = std::size_t(table.nx) * table.ny;
  std::vector<int> pair(d);
  char buf[512];
  for (std::size_t idx = 0; idx < table.vals.size(); ++idx) {
    std::size_t rest = idx;
    for (int j = d - 1; j >= 0; --j) {
      pair[j] = static_cast<int>(rest % pair_count);
      rest /= pair_count;
    }
    std::string line;
    for (int j = 0; j < d; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,", xs[pair[j] / table.ny]);
      line += buf;
    }
    for (int j = 0; j < d; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,", ys[pair[j] % table.ny]);
      line += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", table.vals[idx].real(),
                  table.vals[idx].imag());
    line += buf;
    os << line;
  }
}

void write_table_bin(const STFTTable& table, std::ostream& os) {
  static_assert(std::endian::native == std::endian::little,
                "binary dumps are little-endian");
  os.write("HERMION1", 8);
  const std::uint32_t kind = 0;  // 0 = stft table
  const std::uint32_t dim = static_cast<std::uint32_t>(table.lat.dim);
  os.write(reinterpret_cast<const char*>(&kind), 4);
  os.write(reinterpret_cast<const char*>(&dim), 4);
  const double header[4] = {table.lat.x_step, table.lat.y_step, table.lat.x_extent,
                            table.lat.y_extent};
  os.write(reinterpret_cast<const char*>(header), sizeof header);
  for (const cplx& v : table.vals) {
    const double re = v.real(), im = v.imag();
    os.write(reinterpret_cast<const char*>(&re), 8);
    os.write(reinterpret_cast<const char*>(&im), 8);
  }
}

}  // namespace hermion
