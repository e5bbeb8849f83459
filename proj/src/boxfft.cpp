#include "hermion/boxfft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace hermion {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// FFTW planning is not thread-safe (execution on distinct arrays is), and
// FFTW_ESTIMATE keeps plan selection independent of runtime measurements so
// repeated runs stay bit-identical. Plans are cached per (dim, n, sign) and
// re-applied to fresh fftw-aligned buffers via fftw_execute_dft.
std::mutex g_plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> g_plans;

fftw_plan plan_for(int d, int n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  const auto key = std::make_tuple(d, n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  std::vector<int> dims(d, n);
  const std::size_t total = pow_size(n, d);
  fftw_complex* buf = fftw_alloc_complex(total);
  if (!buf) throw Error(ErrorCode::internal, "fftw allocation failed");
  fftw_plan plan = fftw_plan_dft(d, dims.data(), buf, buf, sign, FFTW_ESTIMATE);
  fftw_free(buf);
  if (!plan) throw Error(ErrorCode::internal, "fftw planning failed");
  g_plans.emplace(key, plan);
  return plan;
}

}  // namespace

BoxTransform::BoxTransform(int dim, int points, double half_width)
    : d_(dim), n_(points), L_(half_width) {
  if (dim < 1 || points < 2 || half_width <= 0) fail_usage("box transform: bad parameters");
}

double BoxTransform::frequency(int bin) const {
  // standard FFT ordering: bins 0..ceil(n/2)-1 are nonnegative, the rest negative
  return (bin < (n_ + 1) / 2 ? bin : bin - n_) * kPi / L_;
}

std::vector<cplx> BoxTransform::run(const std::vector<cplx>& in, int sign) const {
  const std::size_t total = pow_size(n_, d_);
  if (in.size() != total) fail_usage("box transform: size mismatch");
  fftw_plan plan = plan_for(d_, n_, sign == -1 ? FFTW_FORWARD : FFTW_BACKWARD);
  fftw_complex* buf = fftw_alloc_complex(total);
  if (!buf) throw Error(ErrorCode::internal, "fftw allocation failed");
  for (std::size_t idx = 0; idx < total; ++idx) {
    buf[idx][0] = in[idx].real();
    buf[idx][1] = in[idx].imag();
  }
  fftw_execute_dft(plan, buf, buf);
  std::vector<cplx> out(total);
  for (std::size_t idx = 0; idx < total; ++idx) out[idx] = cplx(buf[idx][0], buf[idx][1]);
  fftw_free(buf);
  return out;
}

std::vector<cplx> BoxTransform::forward(const std::vector<cplx>& values) const {
  // Grid offset −L becomes a (−1)^{Σ m_j} twiddle: e^{−iξ_m x_j} = (−1)^m e^{−2πimj/n}.
  const std::size_t total = pow_size(n_, d_);
  std::vector<int> mi(d_);
  const double h = 2.0 * L_ / n_;
  const double scale = std::pow(2.0 * kPi, -0.5 * d_) * std::pow(h, d_);
  std::vector<cplx> spec = run(values, -1);
  for (std::size_t idx = 0; idx < total; ++idx) {
    decode_index(idx, n_, d_, mi.data());
    int msum = 0;
    for (int j = 0; j < d_; ++j) msum += (mi[j] < (n_ + 1) / 2 ? mi[j] : mi[j] - n_);
    const double sgn = (msum % 2 == 0) ? 1.0 : -1.0;
    spec[idx] *= scale * sgn;
  }
  return spec;
}

std::vector<cplx> BoxTransform::inverse(const std::vector<cplx>& spectrum) const {
  const std::size_t total = pow_size(n_, d_);
  if (spectrum.size() != total) fail_usage("box transform: size mismatch");
  std::vector<cplx> in(total);
  std::vector<int> mi(d_);
  for (std::size_t idx = 0; idx < total; ++idx) {
    decode_index(idx, n_, d_, mi.data());
    int msum = 0;
    for (int j = 0; j < d_; ++j) msum += (mi[j] < (n_ + 1) / 2 ? mi[j] : mi[j] - n_);
    const double sgn = (msum % 2 == 0) ? 1.0 : -1.0;
    in[idx] = spectrum[idx] * sgn;
  }
  std::vector<cplx> out = run(in, +1);
  const double dxi = kPi / L_;
  const double scale = std::pow(2.0 * kPi, -0.5 * d_) * std::pow(dxi, d_);
  for (cplx& v : out) v *= scale;
  return out;
}

}  // namespace hermion
