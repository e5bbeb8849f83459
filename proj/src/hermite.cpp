#include "hermion/hermite.hpp"

#include <algorithm>
#include <cmath>

namespace hermion {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kQuarterRootPi = 0.75112554446494248285870300477623;  // π^{−1/4}
}  // namespace

double hermite_1d(int k, double x) {
  if (k < 0) fail_usage("hermite_1d: negative order");
  double h0 = kQuarterRootPi * std::exp(-0.5 * x * x);
  if (k == 0) return h0;
  double hm = h0;
  double h = std::sqrt(2.0) * x * h0;
  for (int j = 1; j < k; ++j) {
    double hp = std::sqrt(2.0 / (j + 1)) * x * h - std::sqrt(double(j) / (j + 1)) * hm;
    hm = h;
    h = hp;
  }
  return h;
}

void hermite_values(int count, double x, double* out) {
  if (count <= 0) return;
  out[0] = kQuarterRootPi * std::exp(-0.5 * x * x);
  if (count == 1) return;
  out[1] = std::sqrt(2.0) * x * out[0];
  for (int k = 1; k + 1 < count; ++k)
    out[k + 1] = std::sqrt(2.0 / (k + 1)) * x * out[k] - std::sqrt(double(k) / (k + 1)) * out[k - 1];
}

double hermite_nd(std::span<const int> alpha, std::span<const double> x) {
  if (alpha.size() != x.size()) fail_usage("hermite_nd: dimension mismatch");
  double prod = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) prod *= hermite_1d(alpha[j], x[j]);
  return prod;
}

QuadratureRule gauss_hermite_rule(int points) {
  if (points < 1) fail_usage("gauss_hermite_rule: need at least one point");
  const int M = points;
  QuadratureRule rule;
  rule.kind = RuleKind::gauss_hermite;
  rule.nodes.assign(M, 0.0);
  rule.weights.assign(M, 0.0);
  rule.plain_weights.assign(M, 0.0);

  std::vector<double> h(M + 1);
  // Roots of h_M, largest first; the rule is symmetric so only half are solved.
  double z = 0.0;
  for (int i = 0; i < (M + 1) / 2; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * M + 1.0) - 1.85575 * std::pow(2.0 * M + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(double(M), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[M - 1];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[M - 2];
    } else {
      z = 2.0 * z - rule.nodes[M - i + 1];
    }
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      hermite_values(M + 1, z, h.data());
      double deriv = std::sqrt(2.0 * M) * h[M - 1] - z * h[M];
      double dz = h[M] / deriv;
      z -= dz;
      if (std::abs(dz) < 1e-14 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw Error(ErrorCode::internal,
                  "gauss_hermite_rule: Newton iteration failed at M=" + std::to_string(M));
    hermite_values(M, z, h.data());
    double s = 0.0;
    for (int k = 0; k < M; ++k) s += h[k] * h[k];
    double plain = 1.0 / s;  // Christoffel weight including the e^{x²} factor
    rule.nodes[M - 1 - i] = z;
    rule.nodes[i] = -z;
    rule.plain_weights[M - 1 - i] = plain;
    rule.plain_weights[i] = plain;
    double classical = plain * std::exp(-z * z);
    rule.weights[M - 1 - i] = classical;
    rule.weights[i] = classical;
  }
  if (M % 2 == 1) rule.nodes[M / 2] = 0.0;  // symmetry: middle root is exact
  return rule;
}

QuadratureRule uniform_box_rule(int points, double half_width) {
  if (points < 2 || half_width <= 0.0) fail_usage("uniform_box_rule: bad parameters");
  QuadratureRule rule;
  rule.kind = RuleKind::uniform_box;
  rule.box_halfwidth = half_width;
  const double h = 2.0 * half_width / points;
  rule.nodes.resize(points);
  for (int i = 0; i < points; ++i) rule.nodes[i] = -half_width + h * i;
  rule.weights.assign(points, h);
  rule.plain_weights.assign(points, h);
  return rule;
}

double HermiteField::l2_norm() const {
  double s = 0.0;
  for (const cplx& c : coeffs) s += std::norm(c);
  return std::sqrt(s);
}

HermiteField HermiteField::basis(int d, int N, std::span<const int> alpha) {
  if (static_cast<int>(alpha.size()) != d) fail_usage("basis: dimension mismatch");
  HermiteField f(d, N);
  for (int j = 0; j < d; ++j)
    if (alpha[j] < 0 || alpha[j] >= N) fail_usage("basis: index outside cutoff");
  f.coeffs[encode_index(alpha.data(), N, d)] = 1.0;
  return f;
}

namespace {
void check_same_shape(const HermiteField& a, const HermiteField& b) {
  if (a.dim != b.dim || a.cutoff != b.cutoff)
    fail_usage("field shape mismatch");
}
}  // namespace

HermiteField operator+(const HermiteField& a, const HermiteField& b) {
  check_same_shape(a, b);
  HermiteField r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  return r;
}

HermiteField operator-(const HermiteField& a, const HermiteField& b) {
  check_same_shape(a, b);
  HermiteField r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= b.coeffs[i];
  return r;
}

HermiteField operator*(cplx s, const HermiteField& f) {
  HermiteField r = f;
  for (cplx& c : r.coeffs) c *= s;
  return r;
}

double l2_distance(const HermiteField& a, const HermiteField& b) {
  check_same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) s += std::norm(a.coeffs[i] - b.coeffs[i]);
  return std::sqrt(s);
}

double grid_l2(const GridField& u) {
  const int M = u.grid.axis.size();
  const int d = u.grid.dim;
  double s = 0.0;
  std::vector<int> ix(d, 0);
  for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
    decode_index(idx, M, d, ix.data());
    double w = 1.0;
    for (int j = 0; j < d; ++j) w *= u.grid.axis.plain_weights[ix[j]];
    s += w * std::norm(u.values[idx]);
  }
  return std::sqrt(s);
}

double grid_lp(const GridField& u, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& v : u.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1.0) fail_usage("grid_lp: p must be >= 1");
  const int M = u.grid.axis.size();
  const int d = u.grid.dim;
  double s = 0.0;
  std::vector<int> ix(d, 0);
  for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
    decode_index(idx, M, d, ix.data());
    double w = 1.0;
    for (int j = 0; j < d; ++j) w *= u.grid.axis.plain_weights[ix[j]];
    s += w * std::pow(std::abs(u.values[idx]), p);
  }
  return std::pow(s, 1.0 / p);
}

namespace {

// Contract matrix A (rows×cols) along one tensor axis:
// out[..., r, ...] = Σ_c A[r*cols+c] data[..., c, ...].
std::vector<cplx> apply_axis(const std::vector<cplx>& data, int d, int axis,
                             const std::vector<double>& A, int rows, int cols) {
  std::size_t inner = 1, outer = 1;
  for (int j = axis + 1; j < d; ++j) inner *= static_cast<std::size_t>(cols);
  // note: all axes share the same extent during a sweep, tracked by caller
  for (int j = 0; j < axis; ++j) outer *= static_cast<std::size_t>(rows);
  std::vector<cplx> out(outer * static_cast<std::size_t>(rows) * inner, cplx{});
  for (std::size_t o = 0; o < outer; ++o) {
    const cplx* src = data.data() + o * static_cast<std::size_t>(cols) * inner;
    cplx* dst = out.data() + o * static_cast<std::size_t>(rows) * inner;
    for (int r = 0; r < rows; ++r) {
      const double* arow = A.data() + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) {
        const double a = arow[c];
        if (a == 0.0) continue;
        const cplx* s = src + static_cast<std::size_t>(c) * inner;
        cplx* t = dst + static_cast<std::size_t>(r) * inner;
        for (std::size_t i = 0; i < inner; ++i) t[i] += a * s[i];
      }
    }
  }
  return out;
}

}  // namespace

HermiteField analyze(const GridField& u, int cutoff) {
  const int M = u.grid.axis.size();
  const int d = u.grid.dim;
  if (cutoff < 1) fail_usage("analyze: cutoff must be positive");
  if (u.grid.axis.kind == RuleKind::gauss_hermite && M < cutoff + 1)
    fail_usage("analyze: under-resolved grid (need at least N+1 Gauss-Hermite points)");
  if (u.grid.axis.kind == RuleKind::uniform_box && M < 2 * cutoff)
    fail_usage("analyze: under-resolved box grid (need at least 2N points)");

  // A[k][i] = W_i h_k(x_i)
  std::vector<double> A(static_cast<std::size_t>(cutoff) * M);
  std::vector<double> h(cutoff);
  for (int i = 0; i < M; ++i) {
    hermite_values(cutoff, u.grid.axis.nodes[i], h.data());
    for (int k = 0; k < cutoff; ++k)
      A[static_cast<std::size_t>(k) * M + i] = u.grid.axis.plain_weights[i] * h[k];
  }
  std::vector<cplx> data = u.values;
  for (int axis = 0; axis < d; ++axis) data = apply_axis(data, d, axis, A, cutoff, M);
  HermiteField f(d, cutoff);
  f.coeffs = std::move(data);
  return f;
}

GridField synthesize(const HermiteField& f, const TensorGrid& grid) {
  if (grid.dim != f.dim) fail_usage("synthesize: dimension mismatch between field and grid");
  const int M = grid.axis.size();
  const int N = f.cutoff;
  std::vector<double> B(static_cast<std::size_t>(M) * N);
  std::vector<double> h(N);
  for (int i = 0; i < M; ++i) {
    hermite_values(N, grid.axis.nodes[i], h.data());
    for (int k = 0; k < N; ++k) B[static_cast<std::size_t>(i) * N + k] = h[k];
  }
  std::vector<cplx> data = f.coeffs;
  for (int axis = 0; axis < f.dim; ++axis) data = apply_axis(data, f.dim, axis, B, M, N);
  GridField u;
  u.grid = grid;
  u.values = std::move(data);
  return u;
}

cplx evaluate_field(const HermiteField& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim) fail_usage("evaluate_field: dimension mismatch");
  const int N = f.cutoff;
  std::vector<double> h(static_cast<std::size_t>(f.dim) * N);
  for (int j = 0; j < f.dim; ++j) hermite_values(N, x[j], h.data() + static_cast<std::size_t>(j) * N);
  cplx sum = 0.0;
  std::vector<int> alpha(f.dim);
  for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx) {
    if (f.coeffs[idx] == cplx{}) continue;
    decode_index(idx, N, f.dim, alpha.data());
    double prod = 1.0;
    for (int j = 0; j < f.dim; ++j) prod *= h[static_cast<std::size_t>(j) * N + alpha[j]];
    sum += f.coeffs[idx] * prod;
  }
  return sum;
}

}  // namespace hermion
