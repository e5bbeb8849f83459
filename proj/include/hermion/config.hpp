#pragma once

#include "hermion/solver.hpp"
#include "hermion/tf.hpp"

namespace hermion {

// ---------------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------------

struct DatumHermiteCoeffs {
  std::vector<cplx> coeffs;  // flat over multi-indices, padded with zeros
};
struct DatumGaussian {
  std::vector<double> center;    // resized to dim
  std::vector<double> momentum;  // resized to dim
  double width = 1.0;
};
// Σ_{0<|k|≤kmax} |k|^{−d/q−ε} e^{ik·x} e^{−|x|²}, k ∈ ℤ^d.
struct DatumRough {
  double q = 2.0;
  double epsilon = 0.1;
  int kmax = 8;
};
struct DatumFile {
  std::string path;
};
using DatumSpec = std::variant<DatumHermiteCoeffs, DatumGaussian, DatumRough, DatumFile>;

struct DatumInfo {
  // l² bound on the truncated part of the k-sum (∞ when the tail is not
  // square-summable, i.e. d/q + ε ≤ d/2).
  double rough_tail_bound = 0.0;
};

HermiteField make_datum(const DatumSpec& spec, int dim, int cutoff,
                        const TensorGrid& gh_grid, DatumInfo* info = nullptr);

// ---------------------------------------------------------------------------
// Run configuration: flat key = value sections, '#' comments.
// ---------------------------------------------------------------------------

struct RunConfig {
  int dim = 1;
  std::uint64_t seed = 12345;
  std::string output_dir = "out";
  bool snapshot_fields = false;  // dump every snapshot field, not just the last

  int cutoff = 0;       // 0 → per-dim default (64 / 32 / 16)
  int quad_points = 0;  // 0 → 2·cutoff

  double box_half_width = 14.0;
  int box_points = 256;

  TFLattice lattice;
  SolverConfig solver;
  DatumSpec datum = DatumGaussian{};

  void normalize();  // resolve defaults, validate sub-configs
  int resolved_cutoff() const;
  int resolved_quad_points() const;

  TensorGrid gh_grid() const;
  TensorGrid box_grid() const;
  EvolveContext evolve_context(bool with_lattice) const;

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text);
  std::string serialize() const;  // canonical form; parse∘serialize is identity
  std::string hash() const;       // FNV-1a of the canonical serialization
};

const char* version_string();

}  // namespace hermion
