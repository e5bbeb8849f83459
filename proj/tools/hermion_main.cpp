// hermion CLI: evolve / norm / verify / report, all driven through the
// shared-library C API.
#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>

#include "hermion.h"

namespace {

struct ConfigDeleter {
  void operator()(hermion_config* c) const { hermion_config_free(c); }
};
using ConfigPtr = std::unique_ptr<hermion_config, ConfigDeleter>;

int fail(hermion_status st) {
  std::fprintf(stderr, "hermion: %s\n", hermion_last_error());
  return static_cast<int>(st);
}

ConfigPtr load_config(const std::string& path, int& rc) {
  hermion_config* raw = nullptr;
  const hermion_status st = hermion_config_load(path.c_str(), &raw);
  if (st != HERMION_OK) {
    rc = fail(st);
    return nullptr;
  }
  rc = 0;
  return ConfigPtr(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite-spectral simulator and time-frequency toolkit"};
  app.set_version_flag("--version", hermion_version());
  app.require_subcommand(1);

  std::string config_path, trace_dir, only_check, report_path, outdir;
  std::string table_csv, table_bin;
  double p = 2.0, q = 2.0;

  CLI::App* evolve = app.add_subcommand("evolve", "time-evolve the configured datum");
  evolve->add_option("config", config_path, "run configuration file")->required();
  evolve->add_option("--outdir", outdir, "override the output directory");

  CLI::App* norm = app.add_subcommand("norm", "modulation norm of the configured datum");
  norm->add_option("config", config_path, "run configuration file")->required();
  norm->add_option("--p", p, "spatial exponent")->required();
  norm->add_option("--q", q, "frequency exponent")->required();
  norm->add_option("--table-csv", table_csv, "also dump the STFT table as CSV");
  norm->add_option("--table-bin", table_bin, "also dump the STFT table as binary");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("config", config_path, "run configuration file")->required();
  verify->add_option("--only", only_check, "run a single check id");
  verify->add_option("--report", report_path, "report file path");

  CLI::App* report = app.add_subcommand("report", "summarize a directory of traces");
  report->add_option("trace_dir", trace_dir, "directory containing .jsonl traces")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2
  }

  if (report->parsed()) {
    const hermion_status st = hermion_run_report(trace_dir.c_str());
    return st == HERMION_OK ? 0 : fail(st);
  }

  int rc = 0;
  ConfigPtr cfg = load_config(config_path, rc);
  if (!cfg) return rc;

  if (evolve->parsed()) {
    const hermion_status st =
        hermion_run_evolve(cfg.get(), outdir.empty() ? nullptr : outdir.c_str());
    if (st != HERMION_OK) return fail(st);
    std::printf("evolve: artifacts written\n");
    return 0;
  }
  if (norm->parsed()) {
    double value = 0.0;
    const hermion_status st = hermion_run_norm(
        cfg.get(), p, q, table_csv.empty() ? nullptr : table_csv.c_str(),
        table_bin.empty() ? nullptr : table_bin.c_str(), &value);
    if (st != HERMION_OK) return fail(st);
    std::printf("%.17g\n", value);
    return 0;
  }
  // verify
  const hermion_status st =
      hermion_run_verify(cfg.get(), only_check.empty() ? nullptr : only_check.c_str(),
                         report_path.empty() ? nullptr : report_path.c_str());
  if (st == HERMION_OK) return 0;
  if (st == HERMION_ERR_CHECK) return 1;
  return fail(st);
}
