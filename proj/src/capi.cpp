#include "hermion.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hermion/trace_io.hpp"
#include "hermion/verify.hpp"

using namespace hermion;
namespace fs = std::filesystem;

struct hermion_config {
  RunConfig cfg;
};
struct hermion_field {
  HermiteField f;
};

namespace {

thread_local std::string g_last_error;

hermion_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::check_failure: return HERMION_ERR_CHECK;
    case ErrorCode::usage: return HERMION_ERR_USAGE;
    case ErrorCode::io: return HERMION_ERR_IO;
    default: return HERMION_ERR_INTERNAL;
  }
}

template <typename Fn>
hermion_status guarded(Fn&& fn) {
  try {
    fn();
    return HERMION_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HERMION_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return HERMION_ERR_INTERNAL;
  }
}

hermion_status usage_error(const char* msg) {
  g_last_error = msg;
  return HERMION_ERR_USAGE;
}

}  // namespace

extern "C" {

const char* hermion_version(void) { return version_string(); }

const char* hermion_last_error(void) { return g_last_error.c_str(); }

hermion_status hermion_config_load(const char* path, hermion_config** out) {
  if (!path || !out) return usage_error("null argument");
  return guarded([&] { *out = new hermion_config{RunConfig::parse_file(path)}; });
}

hermion_status hermion_config_parse(const char* text, hermion_config** out) {
  if (!text || !out) return usage_error("null argument");
  return guarded([&] { *out = new hermion_config{RunConfig::parse_text(text)}; });
}

void hermion_config_free(hermion_config* cfg) { delete cfg; }

hermion_status hermion_config_serialize(const hermion_config* cfg, char** out) {
  if (!cfg || !out) return usage_error("null argument");
  return guarded([&] {
    const std::string s = cfg->cfg.serialize();
    *out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!*out) throw Error(ErrorCode::internal, "out of memory");
    std::memcpy(*out, s.c_str(), s.size() + 1);
  });
}

hermion_status hermion_make_datum(const hermion_config* cfg, hermion_field** out) {
  if (!cfg || !out) return usage_error("null argument");
  return guarded([&] {
    const RunConfig& c = cfg->cfg;
    *out = new hermion_field{
        make_datum(c.datum, c.dim, c.resolved_cutoff(), c.gh_grid())};
  });
}

hermion_status hermion_field_load(const char* path, hermion_field** out) {
  if (!path || !out) return usage_error("null argument");
  return guarded([&] { *out = new hermion_field{read_field_bin(path)}; });
}

void hermion_field_free(hermion_field* f) { delete f; }

int hermion_field_dim(const hermion_field* f) { return f ? f->f.dim : 0; }
int hermion_field_cutoff(const hermion_field* f) { return f ? f->f.cutoff : 0; }
double hermion_field_l2(const hermion_field* f) { return f ? f->f.l2_norm() : 0.0; }

hermion_status hermion_field_coeffs(const hermion_field* f, double* re_im, size_t n) {
  if (!f || !re_im) return usage_error("null argument");
  if (n != f->f.coeffs.size()) return usage_error("coefficient buffer size mismatch");
  for (size_t i = 0; i < n; ++i) {
    re_im[2 * i] = f->f.coeffs[i].real();
    re_im[2 * i + 1] = f->f.coeffs[i].imag();
  }
  return HERMION_OK;
}

hermion_status hermion_evolve_linear(const hermion_field* f, double t, int sign,
                                     hermion_field** out) {
  if (!f || !out) return usage_error("null argument");
  return guarded([&] { *out = new hermion_field{evolve_linear(f->f, t, sign)}; });
}

hermion_status hermion_modulation_norm(const hermion_config* cfg, const hermion_field* f,
                                       double p, double q, double* out) {
  if (!cfg || !f || !out) return usage_error("null argument");
  return guarded([&] {
    TFLattice lat = cfg->cfg.lattice;
    lat.dim = f->f.dim;
    *out = modulation_norm(f->f, p, q, lat);
  });
}

hermion_status hermion_run_evolve(const hermion_config* cfg, const char* outdir_override) {
  if (!cfg) return usage_error("null argument");
  return guarded([&] {
    const RunConfig& c = cfg->cfg;
    const std::string outdir = outdir_override ? outdir_override : c.output_dir;
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) fail_io("evolve: cannot create output directory '" + outdir + "'");

    DatumInfo info;
    const HermiteField u0 = make_datum(c.datum, c.dim, c.resolved_cutoff(), c.gh_grid(), &info);
    EvolveContext ctx = c.evolve_context(/*with_lattice=*/true);

    EvolutionTrace trace;
    if (c.solver.scheme == Scheme::picard) {
      const PicardResult pr = picard_solve(u0, c.solver, ctx);
      Snapshot s0{0.0, u0, u0.l2_norm(), oscillator_energy(u0), {}, {}};
      Snapshot s1{c.solver.horizon, pr.at_horizon, pr.at_horizon.l2_norm(),
                  oscillator_energy(pr.at_horizon), {}, {}};
      trace.snaps = {std::move(s0), std::move(s1)};
    } else {
      trace = evolve_nonlinear(u0, c.solver, ctx);
    }
    write_trace_jsonl((fs::path(outdir) / "trace.jsonl").string(), trace, c);
    write_trace_csv((fs::path(outdir) / "trace.csv").string(), trace);
    write_field_bin((fs::path(outdir) / "final_field.bin").string(),
                    trace.snaps.back().field);
    if (c.snapshot_fields) {
      for (std::size_t i = 0; i < trace.snaps.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "field_%05zu.bin", i);
        write_field_bin((fs::path(outdir) / name).string(), trace.snaps[i].field);
      }
    }
  });
}

hermion_status hermion_run_norm(const hermion_config* cfg, double p, double q,
                                const char* table_csv_path, const char* table_bin_path,
                                double* out) {
  if (!cfg || !out) return usage_error("null argument");
  return guarded([&] {
    const RunConfig& c = cfg->cfg;
    const HermiteField f = make_datum(c.datum, c.dim, c.resolved_cutoff(), c.gh_grid());
    TFLattice lat = c.lattice;
    lat.dim = c.dim;
    const STFTTable table = stft(f, lat);
    *out = mixed_norm_x_then_y(table, p, q);
    if (table_csv_path) {
      std::ofstream os(table_csv_path, std::ios::binary);
      if (!os) fail_io("norm: cannot write table CSV");
      write_table_csv(table, os);
    }
    if (table_bin_path) {
      std::ofstream os(table_bin_path, std::ios::binary);
      if (!os) fail_io("norm: cannot write table dump");
      write_table_bin(table, os);
    }
  });
}

hermion_status hermion_run_verify(const hermion_config* cfg, const char* only_check,
                                  const char* report_path) {
  if (!cfg) return usage_error("null argument");
  bool ok = false;
  const hermion_status st = guarded([&] {
    VerifyOptions opts;
    if (only_check) opts.only = only_check;
    if (report_path) opts.report_path = report_path;
    ok = run_verify(cfg->cfg, opts, std::cout).all_hard_passed;
  });
  if (st != HERMION_OK) return st;
  if (!ok) {
    g_last_error = "one or more hard checks failed";
    return HERMION_ERR_CHECK;
  }
  return HERMION_OK;
}

hermion_status hermion_run_report(const char* trace_dir) {
  if (!trace_dir) return usage_error("null argument");
  return guarded([&] {
    const auto summaries = summarize_trace_dir(trace_dir);
    if (summaries.empty()) {
      std::cout << "no .jsonl traces under " << trace_dir << "\n";
      return;
    }
    std::printf("%-28s %10s %12s %14s %s\n", "trace", "snapshots", "t_final",
                "l2_drift", "status");
    for (const TraceSummary& s : summaries)
      std::printf("%-28s %10d %12.6g %14.6g %s\n", s.file.c_str(), s.snapshots,
                  s.t_final, s.l2_drift, s.aborted ? "aborted" : "ok");
  });
}

}  // extern "C"
