#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "hermion.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hermion_capi_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const char* kConfig = R"(
[run]
dimension = 1
seed = 7
[hermite]
cutoff = 16
quad_points = 32
[lattice]
x_extent = 10.0
y_extent = 10.0
[solver]
horizon = 0.1
dt = 0.01
snapshot_interval = 0.05
[nonlinearity]
type = power
k = 1
sign = -1
[datum]
type = gaussian
)";

}  // namespace

TEST_CASE("config load, serialize, null handling") {
  TempDir tmp;
  const std::string cpath = (tmp.path / "run.conf").string();
  std::ofstream(cpath) << kConfig;

  hermion_config* cfg = nullptr;
  REQUIRE(hermion_config_load(cpath.c_str(), &cfg) == HERMION_OK);
  char* text = nullptr;
  REQUIRE(hermion_config_serialize(cfg, &text) == HERMION_OK);
  CHECK(std::strstr(text, "dimension = 1") != nullptr);
  std::free(text);

  hermion_config* cfg2 = nullptr;
  CHECK(hermion_config_load("/no/such/file.conf", &cfg2) == HERMION_ERR_IO);
  CHECK(std::strlen(hermion_last_error()) > 0);
  CHECK(hermion_config_load(nullptr, &cfg2) == HERMION_ERR_USAGE);

  hermion_config_free(cfg);
}

TEST_CASE("datum, evolve_linear and modulation norm through the C surface") {
  hermion_config* cfg = nullptr;
  REQUIRE(hermion_config_parse(kConfig, &cfg) == HERMION_OK);

  hermion_field* f = nullptr;
  REQUIRE(hermion_make_datum(cfg, &f) == HERMION_OK);
  CHECK(hermion_field_dim(f) == 1);
  CHECK(hermion_field_cutoff(f) == 16);
  CHECK(hermion_field_l2(f) == doctest::Approx(1.0).epsilon(1e-10));

  std::vector<double> buf(2 * 16);
  REQUIRE(hermion_field_coeffs(f, buf.data(), 16) == HERMION_OK);
  CHECK(buf[0] == doctest::Approx(1.0).epsilon(1e-10));  // ground state
  CHECK(hermion_field_coeffs(f, buf.data(), 5) == HERMION_ERR_USAGE);

  hermion_field* g = nullptr;
  REQUIRE(hermion_evolve_linear(f, 3.14159, -1, &g) == HERMION_OK);
  CHECK(hermion_field_l2(g) == doctest::Approx(hermion_field_l2(f)).epsilon(1e-12));

  double norm = 0.0;
  REQUIRE(hermion_modulation_norm(cfg, f, 2.0, 2.0, &norm) == HERMION_OK);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));

  hermion_field_free(g);
  hermion_field_free(f);
  hermion_config_free(cfg);
}

TEST_CASE("run_evolve and run_norm write artifacts") {
  TempDir tmp;
  hermion_config* cfg = nullptr;
  REQUIRE(hermion_config_parse(kConfig, &cfg) == HERMION_OK);

  const std::string outdir = (tmp.path / "out").string();
  REQUIRE(hermion_run_evolve(cfg, outdir.c_str()) == HERMION_OK);
  CHECK(fs::exists(fs::path(outdir) / "trace.jsonl"));
  CHECK(fs::exists(fs::path(outdir) / "trace.csv"));
  CHECK(fs::exists(fs::path(outdir) / "final_field.bin"));

  // determinism: the same run produces byte-identical traces
  const std::string outdir2 = (tmp.path / "out2").string();
  REQUIRE(hermion_run_evolve(cfg, outdir2.c_str()) == HERMION_OK);
  auto slurp = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(is)),
                       std::istreambuf_iterator<char>());
  };
  CHECK(slurp(fs::path(outdir) / "trace.jsonl") == slurp(fs::path(outdir2) / "trace.jsonl"));

  double value = 0.0;
  const std::string tcsv = (tmp.path / "table.csv").string();
  const std::string tbin = (tmp.path / "table.bin").string();
  REQUIRE(hermion_run_norm(cfg, 2.0, 2.0, tcsv.c_str(), tbin.c_str(), &value) == HERMION_OK);
  CHECK(value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fs::exists(tcsv));
  CHECK(fs::exists(tbin));

  REQUIRE(hermion_run_report(outdir.c_str()) == HERMION_OK);
  CHECK(hermion_run_report((tmp.path / "missing").string().c_str()) == HERMION_ERR_IO);

  hermion_config_free(cfg);
}

TEST_CASE("picard scheme and per-snapshot dumps through run_evolve") {
  TempDir tmp;
  std::string text(kConfig);
  text.replace(text.find("snapshot_interval = 0.05"), 24, "snapshot_interval = 0.02");
  text.insert(text.find("[nonlinearity]"), "scheme = picard\n");
  text.insert(text.find("[run]") + 6, "snapshot_fields = true\n");
  hermion_config* cfg = nullptr;
  REQUIRE(hermion_config_parse(text.c_str(), &cfg) == HERMION_OK);

  const std::string outdir = (tmp.path / "picard").string();
  REQUIRE(hermion_run_evolve(cfg, outdir.c_str()) == HERMION_OK);
  CHECK(fs::exists(fs::path(outdir) / "trace.jsonl"));
  CHECK(fs::exists(fs::path(outdir) / "field_00000.bin"));
  CHECK(fs::exists(fs::path(outdir) / "field_00001.bin"));

  hermion_field* f = nullptr;
  REQUIRE(hermion_field_load((fs::path(outdir) / "final_field.bin").string().c_str(), &f) ==
          HERMION_OK);
  CHECK(hermion_field_l2(f) == doctest::Approx(1.0).epsilon(1e-6));
  hermion_field_free(f);
  hermion_config_free(cfg);
}

TEST_CASE("field snapshot loads back through the C surface") {
  TempDir tmp;
  hermion_config* cfg = nullptr;
  REQUIRE(hermion_config_parse(kConfig, &cfg) == HERMION_OK);
  const std::string outdir = (tmp.path / "out").string();
  REQUIRE(hermion_run_evolve(cfg, outdir.c_str()) == HERMION_OK);

  hermion_field* f = nullptr;
  const std::string snap = (fs::path(outdir) / "final_field.bin").string();
  REQUIRE(hermion_field_load(snap.c_str(), &f) == HERMION_OK);
  CHECK(hermion_field_cutoff(f) == 16);
  CHECK(hermion_field_l2(f) == doctest::Approx(1.0).epsilon(1e-9));
  hermion_field_free(f);
  hermion_config_free(cfg);
}

TEST_CASE("verify runs a single cheap check through the C surface") {
  TempDir tmp;
  hermion_config* cfg = nullptr;
  REQUIRE(hermion_config_parse(kConfig, &cfg) == HERMION_OK);
  const std::string report = (tmp.path / "report.json").string();
  CHECK(hermion_run_verify(cfg, "admissible-pair", report.c_str()) == HERMION_OK);
  CHECK(fs::exists(report));
  CHECK(hermion_run_verify(cfg, "no-such-check", report.c_str()) == HERMION_ERR_USAGE);
  hermion_config_free(cfg);
}
