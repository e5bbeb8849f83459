#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hermion/trace_io.hpp"
#include "test_utils.hpp"

using namespace hermion;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hermion_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const char* kSampleConfig = R"(
# sample run
[run]
dimension = 1
seed = 99

[hermite]
cutoff = 32
quad_points = 64

[solver]
horizon = 0.5
dt = 0.001
scheme = strang

[nonlinearity]
type = hartree
lambda = 1.0
gamma = 0.4

[datum]
type = gaussian
width = 1.0
)";

}  // namespace

TEST_CASE("config parse and canonical round trip") {
  const RunConfig cfg = RunConfig::parse_text(kSampleConfig);
  CHECK(cfg.dim == 1);
  CHECK(cfg.seed == 99);
  CHECK(cfg.cutoff == 32);
  CHECK(cfg.solver.scheme == Scheme::strang);
  CHECK(std::holds_alternative<HartreeNonlin>(cfg.solver.nonlin));

  const std::string canon = cfg.serialize();
  const RunConfig cfg2 = RunConfig::parse_text(canon);
  CHECK(cfg2.serialize() == canon);  // idempotent after first normalization
  CHECK(cfg2.hash() == cfg.hash());
}

TEST_CASE("config defaults resolve per dimension") {
  RunConfig cfg;
  cfg.dim = 1;
  CHECK(cfg.resolved_cutoff() == 64);
  CHECK(cfg.resolved_quad_points() == 128);
  cfg.dim = 2;
  CHECK(cfg.resolved_cutoff() == 32);
  cfg.dim = 3;
  CHECK(cfg.resolved_cutoff() == 16);
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS((void)RunConfig::parse_text("[run\ndimension = 1\n"), Error);
  CHECK_THROWS_AS((void)RunConfig::parse_text("[run]\nnonsense line\n"), Error);
  CHECK_THROWS_AS((void)RunConfig::parse_text("[run]\ndimension = seven\n"), Error);
  CHECK_THROWS_AS((void)RunConfig::parse_text("[solver]\nscheme = rk4\n"), Error);
  CHECK_THROWS_AS((void)RunConfig::parse_text("[run]\ndimension = 5\n"), Error);
  CHECK_THROWS_AS((void)RunConfig::parse_file("/nonexistent/path.conf"), Error);
}

TEST_CASE("config hash tracks content") {
  RunConfig a, b;
  b.seed = a.seed + 1;
  CHECK(a.hash() != b.hash());
  RunConfig c = a;
  CHECK(c.hash() == a.hash());
}

TEST_CASE("gaussian datum is the ground state") {
  const TensorGrid grid{1, gauss_hermite_rule(64)};
  const HermiteField f = make_datum(DatumGaussian{}, 1, 32, grid);
  CHECK(std::abs(f.coeffs[0] - 1.0) < 1e-12);
  for (int k = 1; k < 32; ++k) CHECK(std::abs(f.coeffs[k]) < 1e-12);
}

TEST_CASE("hermite_coeffs datum picks basis modes") {
  const TensorGrid grid{1, gauss_hermite_rule(16)};
  DatumHermiteCoeffs dc;
  dc.coeffs = {cplx(1.0, 0.0)};
  const HermiteField f = make_datum(dc, 1, 8, grid);
  CHECK(f.coeffs[0] == cplx(1.0, 0.0));
  CHECK(f.l2_norm() == doctest::Approx(1.0));

  dc.coeffs.assign(100, cplx(1.0, 0.0));
  CHECK_THROWS_AS((void)make_datum(dc, 1, 8, grid), Error);
}

TEST_CASE("rough datum: realness, tail bound, aliasing guard") {
  const TensorGrid grid{1, gauss_hermite_rule(160)};
  DatumInfo info;
  const HermiteField f = make_datum(DatumRough{2.0, 0.1, 6}, 1, 64, grid, &info);
  // symmetric k-sum ⇒ real function ⇒ real coefficients (h_k real)
  double imag_max = 0.0;
  for (const cplx& c : f.coeffs) imag_max = std::max(imag_max, std::abs(c.imag()));
  CHECK(imag_max < 1e-12 * f.l2_norm());
  CHECK(info.rough_tail_bound > 0.0);
  CHECK(std::isfinite(info.rough_tail_bound));

  CHECK_THROWS_AS((void)make_datum(DatumRough{2.0, 0.1, 16}, 1, 64, grid), Error);
}

TEST_CASE("field binary dump round trips exactly") {
  TempDir tmp;
  const HermiteField f = random_field(991, 2, 6);
  const std::string path = (tmp.path / "field.bin").string();
  write_field_bin(path, f);
  const HermiteField g = read_field_bin(path);
  CHECK(g.dim == f.dim);
  CHECK(g.cutoff == f.cutoff);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) CHECK(g.coeffs[i] == f.coeffs[i]);

  CHECK_THROWS_AS((void)read_field_bin((tmp.path / "missing.bin").string()), Error);
  std::ofstream bad((tmp.path / "bad.bin").string(), std::ios::binary);
  bad << "NOTMAGIC" << std::string(64, '\0');
  bad.close();
  CHECK_THROWS_AS((void)read_field_bin((tmp.path / "bad.bin").string()), Error);
}

TEST_CASE("file datum embeds into the configured cutoff") {
  TempDir tmp;
  const TensorGrid grid{1, gauss_hermite_rule(32)};
  const HermiteField f = random_field(997, 1, 8);
  const std::string path = (tmp.path / "datum.bin").string();
  write_field_bin(path, f);
  const HermiteField g = make_datum(DatumFile{path}, 1, 16, grid);
  CHECK(g.cutoff == 16);
  for (int k = 0; k < 8; ++k) CHECK(g.coeffs[k] == f.coeffs[k]);
  for (int k = 8; k < 16; ++k) CHECK(g.coeffs[k] == cplx{});
}

TEST_CASE("trace writers emit parseable artifacts") {
  TempDir tmp;
  RunConfig cfg;
  EvolutionTrace tr;
  for (int i = 0; i <= 4; ++i) {
    Snapshot s;
    s.t = 0.1 * i;
    s.field = random_field(1000 + i, 1, 4);
    s.l2 = s.field.l2_norm();
    s.energy = 1.0 + i;
    s.mnorms["m11"] = 2.0 * i;
    s.mnorms["m22"] = 3.0 * i;
    tr.snaps.push_back(std::move(s));
  }
  const std::string jsonl = (tmp.path / "trace.jsonl").string();
  const std::string csv = (tmp.path / "trace.csv").string();
  write_trace_jsonl(jsonl, tr, cfg);
  write_trace_csv(csv, tr);

  std::ifstream is(jsonl);
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 6);  // header + 5 snapshots

  std::ifstream cs(csv);
  std::getline(cs, line);
  CHECK(line == "t,l2,energy,m11,m22");

  const auto summaries = summarize_trace_dir(tmp.path.string());
  REQUIRE(summaries.size() == 1);
  CHECK(summaries[0].snapshots == 5);
  CHECK(summaries[0].t_final == doctest::Approx(0.4));
  CHECK_FALSE(summaries[0].aborted);

  CHECK_THROWS_AS((void)summarize_trace_dir((tmp.path / "nope").string()), Error);
}

TEST_CASE("box field dump round trips and feeds grid kernels") {
  TempDir tmp;
  GridField f;
  f.grid = TensorGrid{1, uniform_box_rule(64, 8.0)};
  f.values.resize(f.grid.size());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = cplx(std::exp(-0.1 * double(i)), 0.0);
  const std::string path = (tmp.path / "kernel.bin").string();
  write_box_field_bin(path, f);
  const GridField g = read_box_field_bin(path);
  CHECK(g.grid.dim == 1);
  CHECK(g.grid.axis.size() == 64);
  CHECK(g.grid.axis.box_halfwidth == 8.0);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(g.values[i] == f.values[i]);

  std::string text = R"(
[run]
dimension = 1
[box]
points = 64
half_width = 8.0
[nonlinearity]
type = hartree
kernel_file = )" + path + "\n";
  const RunConfig cfg = RunConfig::parse_text(text);
  const auto* ha = std::get_if<HartreeNonlin>(&cfg.solver.nonlin);
  REQUIRE(ha != nullptr);
  CHECK(std::holds_alternative<GridKernel>(ha->kernel));

  // mismatched box is rejected
  std::string bad = R"(
[run]
dimension = 1
[box]
points = 128
half_width = 8.0
[nonlinearity]
type = hartree
kernel_file = )" + path + "\n";
  CHECK_THROWS_AS((void)RunConfig::parse_text(bad), Error);
}

TEST_CASE("snapshot_fields flag round trips") {
  RunConfig cfg = RunConfig::parse_text("[run]\nsnapshot_fields = true\n");
  CHECK(cfg.snapshot_fields);
  const std::string canon = cfg.serialize();
  CHECK(RunConfig::parse_text(canon).snapshot_fields);
  CHECK_THROWS_AS((void)RunConfig::parse_text("[run]\nsnapshot_fields = maybe\n"), Error);
}

TEST_CASE("grid kernel file hookup through config") {
  TempDir tmp;
  const std::string kpath = (tmp.path / "kernel.csv").string();
  {
    std::ofstream os(kpath);
    for (int i = 0; i < 64; ++i) os << 0.5 << "\n";
  }
  std::string text = R"(
[run]
dimension = 1
[box]
points = 64
half_width = 8.0
[nonlinearity]
type = hartree
kernel_file = )" + kpath + "\n";
  const RunConfig cfg = RunConfig::parse_text(text);
  const auto* ha = std::get_if<HartreeNonlin>(&cfg.solver.nonlin);
  REQUIRE(ha != nullptr);
  CHECK(std::holds_alternative<GridKernel>(ha->kernel));
}
