#include "hermion/trace_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace hermion {

using nlohmann::json;
namespace fs = std::filesystem;

void write_trace_jsonl(const std::string& path, const EvolutionTrace& trace,
                       const RunConfig& cfg) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_io("trace: cannot write '" + path + "'");
  json header = {{"format", "HERMION1"},
                 {"kind", "trace"},
                 {"version", version_string()},
                 {"config_hash", cfg.hash()}};
  if (const auto* en = std::get_if<EntireNonlin>(&cfg.solver.nonlin)) {
    // truncation-quality indicator: the top majorant shell evaluated at the
    // datum's pointwise sup (large values flag an under-truncated series)
    double sup_re = 0.0, sup_im = 0.0;
    if (!trace.snaps.empty()) {
      const GridField u = synthesize(trace.snaps.front().field, cfg.gh_grid());
      for (const cplx& v : u.values) {
        sup_re = std::max(sup_re, std::abs(v.real()));
        sup_im = std::max(sup_im, std::abs(v.imag()));
      }
    }
    header["majorant_top_shell"] = en->series.majorant().top_shell(sup_re, sup_im);
  }
  os << header.dump() << "\n";
  for (const Snapshot& s : trace.snaps) {
    json rec = {{"t", s.t}, {"l2", s.l2}, {"energy", s.energy}};
    for (const auto& [k, v] : s.mnorms) rec[k] = v;
    rec["flags"] = s.flags;
    os << rec.dump() << "\n";
  }
  if (trace.aborted) {
    json tail = {{"aborted", true}, {"reason", trace.abort_reason}};
    os << tail.dump() << "\n";
  }
}

void write_trace_csv(const std::string& path, const EvolutionTrace& trace) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_io("trace: cannot write '" + path + "'");
  std::vector<std::string> mkeys;
  if (!trace.snaps.empty())
    for (const auto& [k, v] : trace.snaps.front().mnorms) mkeys.push_back(k);
  os << "t,l2,energy";
  for (const auto& k : mkeys) os << "," << k;
  os << "\n";
  char buf[64];
  for (const Snapshot& s : trace.snaps) {
    auto put = [&](double v, bool lead_comma) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      if (lead_comma) os << ",";
      os << buf;
    };
    put(s.t, false);
    put(s.l2, true);
    put(s.energy, true);
    for (const auto& k : mkeys) put(s.mnorms.count(k) ? s.mnorms.at(k) : 0.0, true);
    os << "\n";
  }
}

void write_field_bin(const std::string& path, const HermiteField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_io("field: cannot write '" + path + "'");
  os.write("HERMION1", 8);
  const std::uint32_t kind = 1, dim = std::uint32_t(f.dim), cutoff = std::uint32_t(f.cutoff);
  os.write(reinterpret_cast<const char*>(&kind), 4);
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&cutoff), 4);
  for (const cplx& c : f.coeffs) {
    const double re = c.real(), im = c.imag();
    os.write(reinterpret_cast<const char*>(&re), 8);
    os.write(reinterpret_cast<const char*>(&im), 8);
  }
}

HermiteField read_field_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_io("field: cannot open '" + path + "'");
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "HERMION1", 8) != 0)
    fail_io("field: '" + path + "' is not a HERMION1 dump");
  std::uint32_t kind = 0, dim = 0, cutoff = 0;
  is.read(reinterpret_cast<char*>(&kind), 4);
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&cutoff), 4);
  if (!is || kind != 1) fail_io("field: '" + path + "' does not contain a field snapshot");
  if (dim < 1 || dim > 3 || cutoff < 1 || cutoff > 4096) fail_io("field: corrupt header");
  HermiteField f(static_cast<int>(dim), static_cast<int>(cutoff));
  for (cplx& c : f.coeffs) {
    double re = 0, im = 0;
    is.read(reinterpret_cast<char*>(&re), 8);
    is.read(reinterpret_cast<char*>(&im), 8);
    c = cplx(re, im);
  }
  if (!is) fail_io("field: truncated payload in '" + path + "'");
  return f;
}

void write_box_field_bin(const std::string& path, const GridField& f) {
  if (f.grid.axis.kind != RuleKind::uniform_box)
    fail_usage("box field dump: samples must live on a uniform box");
  std::ofstream os(path, std::ios::binary);
  if (!os) fail_io("box field: cannot write '" + path + "'");
  os.write("HERMION1", 8);
  const std::uint32_t kind = 2, dim = std::uint32_t(f.grid.dim),
                      points = std::uint32_t(f.grid.axis.size());
  const double half_width = f.grid.axis.box_halfwidth;
  os.write(reinterpret_cast<const char*>(&kind), 4);
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&points), 4);
  os.write(reinterpret_cast<const char*>(&half_width), 8);
  for (const cplx& c : f.values) {
    const double re = c.real(), im = c.imag();
    os.write(reinterpret_cast<const char*>(&re), 8);
    os.write(reinterpret_cast<const char*>(&im), 8);
  }
}

GridField read_box_field_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_io("box field: cannot open '" + path + "'");
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "HERMION1", 8) != 0)
    fail_io("box field: '" + path + "' is not a HERMION1 dump");
  std::uint32_t kind = 0, dim = 0, points = 0;
  double half_width = 0.0;
  is.read(reinterpret_cast<char*>(&kind), 4);
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&points), 4);
  is.read(reinterpret_cast<char*>(&half_width), 8);
  if (!is || kind != 2) fail_io("box field: '" + path + "' does not contain box samples");
  if (dim < 1 || dim > 3 || points < 2 || !(half_width > 0.0))
    fail_io("box field: corrupt header");
  GridField f;
  f.grid = TensorGrid{static_cast<int>(dim),
                      uniform_box_rule(static_cast<int>(points), half_width)};
  f.values.resize(f.grid.size());
  for (cplx& c : f.values) {
    double re = 0, im = 0;
    is.read(reinterpret_cast<char*>(&re), 8);
    is.read(reinterpret_cast<char*>(&im), 8);
    c = cplx(re, im);
  }
  if (!is) fail_io("box field: truncated payload in '" + path + "'");
  return f;
}

std::vector<TraceSummary> summarize_trace_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) fail_io("report: '" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<TraceSummary> out;
  for (const fs::path& p : files) {
    std::ifstream is(p);
    if (!is) fail_io("report: cannot open '" + p.string() + "'");
    TraceSummary sum;
    sum.file = p.filename().string();
    std::string line;
    double l2_first = -1.0;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      json rec = json::parse(line, nullptr, false);
      if (rec.is_discarded()) fail_io("report: malformed JSON in '" + p.string() + "'");
      if (rec.contains("aborted")) {
        sum.aborted = rec["aborted"].get<bool>();
        continue;
      }
      if (!rec.contains("t")) continue;  // header
      ++sum.snapshots;
      sum.t_final = rec["t"].get<double>();
      const double l2 = rec["l2"].get<double>();
      if (l2_first < 0.0)
        l2_first = l2;
      else if (l2_first > 0.0)
        sum.l2_drift = std::max(sum.l2_drift, std::abs(l2 - l2_first) / l2_first);
    }
    out.push_back(std::move(sum));
  }
  return out;
}

}  // namespace hermion
