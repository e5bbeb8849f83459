#pragma once

#include "hermion/config.hpp"
#include "hermion/solver.hpp"

namespace hermion {

// JSON-lines trace: first record {"format":"HERMION1","kind":"trace",...},
// then one record per snapshot {t, l2, m11, m22, energy, flags}.
void write_trace_jsonl(const std::string& path, const EvolutionTrace& trace,
                       const RunConfig& cfg);

// Plot-ready CSV: t plus one column per monitor.
void write_trace_csv(const std::string& path, const EvolutionTrace& trace);

// Binary field snapshot, same framing as the STFT dump (magic "HERMION1",
// kind 1, dim, cutoff, row-major re/im pairs, little-endian).
void write_field_bin(const std::string& path, const HermiteField& f);
HermiteField read_field_bin(const std::string& path);

// Box-sampled field (kind 2): dim, points, half_width, row-major re/im pairs.
// Used for grid-kernel input alongside the CSV form.
void write_box_field_bin(const std::string& path, const GridField& f);
GridField read_box_field_bin(const std::string& path);

// Summary of a directory of traces (the `report` subcommand).
struct TraceSummary {
  std::string file;
  int snapshots = 0;
  double t_final = 0.0;
  double l2_drift = 0.0;  // max relative deviation from the first snapshot
  bool aborted = false;
};
std::vector<TraceSummary> summarize_trace_dir(const std::string& dir);

}  // namespace hermion
