#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hermion {

using cplx = std::complex<double>;

// Error categories aligned with the process exit codes of the CLI.
enum class ErrorCode : int {
  check_failure = 1,
  usage = 2,
  io = 3,
  internal = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail_usage(const std::string& msg) {
  throw Error(ErrorCode::usage, msg);
}
[[noreturn]] inline void fail_io(const std::string& msg) {
  throw Error(ErrorCode::io, msg);
}

// ---------------------------------------------------------------------------
// Multi-index helpers. Coefficient tensors over α ∈ {0..N−1}^d are stored
// flat in row-major order (α_0 slowest).
// ---------------------------------------------------------------------------

inline std::size_t pow_size(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// |α| for the flat index `idx` in a {0..N−1}^d tensor.
inline int level_of(std::size_t idx, int N, int d) {
  int lvl = 0;
  for (int j = 0; j < d; ++j) {
    lvl += static_cast<int>(idx % static_cast<std::size_t>(N));
    idx /= static_cast<std::size_t>(N);
  }
  return lvl;
}

inline void decode_index(std::size_t idx, int N, int d, int* alpha) {
  for (int j = d - 1; j >= 0; --j) {
    alpha[j] = static_cast<int>(idx % static_cast<std::size_t>(N));
    idx /= static_cast<std::size_t>(N);
  }
}

inline std::size_t encode_index(const int* alpha, int N, int d) {
  std::size_t idx = 0;
  for (int j = 0; j < d; ++j)
    idx = idx * static_cast<std::size_t>(N) + static_cast<std::size_t>(alpha[j]);
  return idx;
}

// Deterministic Gaussian deviates: Box–Muller over mt19937_64 output so that
// a fixed seed reproduces bit-identically on any conforming toolchain.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  double uniform() {
    // xorshift-free: splitmix64 step, top 53 bits
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do { u1 = uniform(); } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

}  // namespace hermion
