#include <cmath>
#include <fstream>

#include "hermion/config.hpp"
#include "hermion/trace_io.hpp"

namespace hermion {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

HermiteField from_coeff_list(const std::vector<cplx>& list, int dim, int cutoff) {
  HermiteField f(dim, cutoff);
  if (list.size() > f.coeffs.size())
    fail_usage("datum: more coefficients than the cutoff admits");
  std::copy(list.begin(), list.end(), f.coeffs.begin());
  return f;
}

HermiteField gaussian_datum(const DatumGaussian& g, int dim, int cutoff,
                            const TensorGrid& grid) {
  if (!(g.width > 0.0)) fail_usage("datum: gaussian width must be positive");
  std::vector<double> center(dim, 0.0), momentum(dim, 0.0);
  for (int j = 0; j < std::min<int>(dim, g.center.size()); ++j) center[j] = g.center[j];
  for (int j = 0; j < std::min<int>(dim, g.momentum.size()); ++j) momentum[j] = g.momentum[j];

  const double amp = std::pow(kPi * g.width * g.width, -0.25);
  const int M = grid.axis.size();
  GridField u;
  u.grid = grid;
  u.values.resize(grid.size());
  std::vector<int> ix(dim);
  for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
    decode_index(idx, M, dim, ix.data());
    double mag = 1.0, phase = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double x = grid.axis.nodes[ix[j]];
      const double z = (x - center[j]) / g.width;
      mag *= amp * std::exp(-0.5 * z * z);
      phase += momentum[j] * x;
    }
    u.values[idx] = std::polar(mag, phase);
  }
  return analyze(u, cutoff);
}

HermiteField rough_datum(const DatumRough& r, int dim, int cutoff,
                         const TensorGrid& grid, DatumInfo* info) {
  // Modes |α| ≈ kmax²/3 carry the bulk of each plane wave's Hermite mass;
  // reject cutoffs that would silently alias it away.
  if (cutoff < (r.kmax * r.kmax + 1) / 2)
    fail_usage("datum: rough_example needs cutoff >= kmax^2/2 (aliasing guard)");
  const double decay = double(dim) / r.q + r.epsilon;
  const int M = grid.axis.size();

  GridField u;
  u.grid = grid;
  u.values.assign(grid.size(), cplx{});

  // enumerate k ∈ ℤ^d, 0 < |k| ≤ kmax; symmetric pairs k, −k keep f real
  std::vector<int> k(dim, -r.kmax);
  std::vector<int> ix(dim);
  const std::size_t total_k = pow_size(2 * r.kmax + 1, dim);
  for (std::size_t ki = 0; ki < total_k; ++ki) {
    std::size_t rest = ki;
    double k2 = 0.0;
    for (int j = dim - 1; j >= 0; --j) {
      k[j] = int(rest % std::size_t(2 * r.kmax + 1)) - r.kmax;
      rest /= std::size_t(2 * r.kmax + 1);
    }
    for (int j = 0; j < dim; ++j) k2 += double(k[j]) * k[j];
    if (k2 == 0.0 || k2 > double(r.kmax) * r.kmax) continue;
    const double coeff = std::pow(std::sqrt(k2), -decay);
    for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
      decode_index(idx, M, dim, ix.data());
      double phase = 0.0, x2 = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double x = grid.axis.nodes[ix[j]];
        phase += k[j] * x;
        x2 += x * x;
      }
      u.values[idx] += coeff * std::exp(-x2) * std::polar(1.0, phase);
    }
  }
  if (info) {
    // l² mass of the omitted coefficients: Σ_{|k|>kmax} |k|^{−2·decay} bounded
    // by ω_{d−1} ∫_{kmax}^∞ r^{d−1−2·decay} dr; finite exactly when the datum
    // has finite L²-norm tail (decay > d/2), matching the M^{2,2} check.
    const double e = dim - 1.0 - 2.0 * decay;
    const double omega = 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
    info->rough_tail_bound =
        (e + 1.0 < 0.0)
            ? std::sqrt(omega * std::pow(double(r.kmax), e + 1.0) / (-(e + 1.0)))
            : std::numeric_limits<double>::infinity();
  }
  return analyze(u, cutoff);
}

}  // namespace

HermiteField make_datum(const DatumSpec& spec, int dim, int cutoff,
                        const TensorGrid& gh_grid, DatumInfo* info) {
  if (info) *info = DatumInfo{};
  if (const auto* dc = std::get_if<DatumHermiteCoeffs>(&spec))
    return from_coeff_list(dc->coeffs, dim, cutoff);
  if (const auto* g = std::get_if<DatumGaussian>(&spec))
    return gaussian_datum(*g, dim, cutoff, gh_grid);
  if (const auto* r = std::get_if<DatumRough>(&spec))
    return rough_datum(*r, dim, cutoff, gh_grid, info);
  const auto& file = std::get<DatumFile>(spec);
  HermiteField f = read_field_bin(file.path);
  if (f.dim != dim) fail_usage("datum: file field dimension mismatch");
  if (f.cutoff > cutoff) fail_usage("datum: file field cutoff exceeds configuration");
  HermiteField out(dim, cutoff);
  // re-embed into the configured cutoff
  std::vector<int> alpha(dim);
  for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx) {
    decode_index(idx, f.cutoff, dim, alpha.data());
    out.coeffs[encode_index(alpha.data(), cutoff, dim)] = f.coeffs[idx];
  }
  return out;
}

}  // namespace hermion
