#include "hermion/config.hpp"

#include "hermion/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#ifndef HERMION_VERSION
#define HERMION_VERSION "0.0.0-unknown"
#endif

namespace hermion {

const char* version_string() { return HERMION_VERSION; }

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip
  return std::string(buf, end);
}

double parse_double(const std::string& s, const std::string& key) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail_usage("config: bad number for '" + key + "': " + s);
  }
}

long long parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail_usage("config: bad integer for '" + key + "': " + s);
  }
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

// key → value within a section; insertion order is irrelevant because
// serialization emits a fixed canonical order.
using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

Sections parse_sections(const std::string& text) {
  Sections out;
  std::string section = "run";
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail_usage("config: malformed section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail_usage("config: empty section name");
      out[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail_usage("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail_usage("config: empty key at line " + std::to_string(lineno));
    out[section][key] = val;
  }
  return out;
}

const std::string* find(const Sections& s, const std::string& sec, const std::string& key) {
  auto it = s.find(sec);
  if (it == s.end()) return nullptr;
  auto jt = it->second.find(key);
  if (jt == it->second.end()) return nullptr;
  return &jt->second;
}

}  // namespace

int RunConfig::resolved_cutoff() const {
  if (cutoff > 0) return cutoff;
  if (dim == 1) return 64;
  if (dim == 2) return 32;
  return 16;
}

int RunConfig::resolved_quad_points() const {
  return quad_points > 0 ? quad_points : 2 * resolved_cutoff();
}

void RunConfig::normalize() {
  if (dim < 1 || dim > 3) fail_usage("config: dimension must be 1, 2 or 3");
  if (cutoff < 0 || quad_points < 0) fail_usage("config: negative grid sizes");
  if (quad_points > 0 && quad_points < resolved_cutoff() + 1)
    fail_usage("config: quad_points must be at least cutoff+1");
  if (box_points < 2 || box_half_width <= 0) fail_usage("config: bad box parameters");
  lattice.dim = dim;
  lattice.validate();
  solver.validate();
  if (solver.monitor_ps.empty()) solver.monitor_ps = {1.0, 2.0};
  if (const auto* r = std::get_if<DatumRough>(&datum)) {
    if (r->q < 1.0 || r->epsilon <= 0.0 || r->kmax < 1)
      fail_usage("config: rough datum needs q >= 1, epsilon > 0, kmax >= 1");
  }
}

TensorGrid RunConfig::gh_grid() const {
  return TensorGrid{dim, gauss_hermite_rule(resolved_quad_points())};
}

TensorGrid RunConfig::box_grid() const {
  return TensorGrid{dim, uniform_box_rule(box_points, box_half_width)};
}

EvolveContext RunConfig::evolve_context(bool with_lattice) const {
  EvolveContext ctx{gh_grid(), box_grid(), std::nullopt};
  if (with_lattice) ctx.lattice = lattice;
  return ctx;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail_io("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_text(ss.str());
}

RunConfig RunConfig::parse_text(const std::string& text) {
  const Sections s = parse_sections(text);
  RunConfig cfg;

  if (const auto* v = find(s, "run", "dimension")) cfg.dim = int(parse_int(*v, "dimension"));
  if (const auto* v = find(s, "run", "seed")) cfg.seed = std::uint64_t(parse_int(*v, "seed"));
  if (const auto* v = find(s, "run", "output_dir")) cfg.output_dir = *v;
  if (const auto* v = find(s, "run", "snapshot_fields")) {
    if (*v == "true" || *v == "1") cfg.snapshot_fields = true;
    else if (*v == "false" || *v == "0") cfg.snapshot_fields = false;
    else fail_usage("config: snapshot_fields must be true or false");
  }

  if (const auto* v = find(s, "hermite", "cutoff")) cfg.cutoff = int(parse_int(*v, "cutoff"));
  if (const auto* v = find(s, "hermite", "quad_points"))
    cfg.quad_points = int(parse_int(*v, "quad_points"));

  if (const auto* v = find(s, "box", "half_width"))
    cfg.box_half_width = parse_double(*v, "half_width");
  if (const auto* v = find(s, "box", "points")) cfg.box_points = int(parse_int(*v, "points"));

  if (const auto* v = find(s, "lattice", "x_step")) cfg.lattice.x_step = parse_double(*v, "x_step");
  if (const auto* v = find(s, "lattice", "y_step")) cfg.lattice.y_step = parse_double(*v, "y_step");
  if (const auto* v = find(s, "lattice", "x_extent"))
    cfg.lattice.x_extent = parse_double(*v, "x_extent");
  if (const auto* v = find(s, "lattice", "y_extent"))
    cfg.lattice.y_extent = parse_double(*v, "y_extent");
  if (const auto* v = find(s, "lattice", "window_width"))
    cfg.lattice.window_width = parse_double(*v, "window_width");
  if (const auto* v = find(s, "lattice", "quad_step"))
    cfg.lattice.quad_step = parse_double(*v, "quad_step");

  if (const auto* v = find(s, "solver", "horizon")) cfg.solver.horizon = parse_double(*v, "horizon");
  if (const auto* v = find(s, "solver", "dt")) cfg.solver.dt = parse_double(*v, "dt");
  if (const auto* v = find(s, "solver", "scheme")) {
    if (*v == "picard") cfg.solver.scheme = Scheme::picard;
    else if (*v == "lie") cfg.solver.scheme = Scheme::lie;
    else if (*v == "strang") cfg.solver.scheme = Scheme::strang;
    else fail_usage("config: unknown scheme '" + *v + "'");
  }
  if (const auto* v = find(s, "solver", "picard_iters"))
    cfg.solver.picard_iters = int(parse_int(*v, "picard_iters"));
  if (const auto* v = find(s, "solver", "time_quadrature_nodes"))
    cfg.solver.time_nodes = int(parse_int(*v, "time_quadrature_nodes"));
  if (const auto* v = find(s, "solver", "time_samples"))
    cfg.solver.time_samples = int(parse_int(*v, "time_samples"));
  if (const auto* v = find(s, "solver", "fixed_point_tol"))
    cfg.solver.fixed_point_tol = parse_double(*v, "fixed_point_tol");
  if (const auto* v = find(s, "solver", "conservation_tol"))
    cfg.solver.conservation_tol = parse_double(*v, "conservation_tol");
  if (const auto* v = find(s, "solver", "linear_sign"))
    cfg.solver.linear_sign = int(parse_int(*v, "linear_sign"));
  if (const auto* v = find(s, "solver", "snapshot_interval"))
    cfg.solver.snapshot_dt = parse_double(*v, "snapshot_interval");
  if (const auto* v = find(s, "solver", "monitor_p")) {
    cfg.solver.monitor_ps.clear();
    for (const std::string& item : split_list(*v))
      cfg.solver.monitor_ps.push_back(parse_double(item, "monitor_p"));
  }
  if (const auto* v = find(s, "solver", "blowup_factor"))
    cfg.solver.blowup_factor = parse_double(*v, "blowup_factor");

  if (const auto* v = find(s, "nonlinearity", "type")) {
    const std::string& t = *v;
    if (t == "none") {
      cfg.solver.nonlin = std::monostate{};
    } else if (t == "power") {
      PowerNonlin pw;
      if (const auto* k = find(s, "nonlinearity", "k")) pw.k = int(parse_int(*k, "k"));
      if (const auto* sg = find(s, "nonlinearity", "sign")) pw.sign = parse_double(*sg, "sign");
      cfg.solver.nonlin = pw;
    } else if (t == "hartree") {
      HartreeNonlin ha;
      HartreeKernel hk;
      if (const auto* l = find(s, "nonlinearity", "lambda")) hk.lambda = parse_double(*l, "lambda");
      if (const auto* g = find(s, "nonlinearity", "gamma")) hk.gamma = parse_double(*g, "gamma");
      if (const auto* k = find(s, "nonlinearity", "k")) ha.k = int(parse_int(*k, "k"));
      if (const auto* kf = find(s, "nonlinearity", "kernel_file")) {
        // grid-sampled kernel override: CSV of samples, or a HERMION1 box dump
        GridKernel gk;
        if (kf->size() > 4 && kf->compare(kf->size() - 4, 4, ".bin") == 0) {
          gk.samples = read_box_field_bin(*kf);
          if (gk.samples.grid.dim != cfg.dim ||
              gk.samples.grid.axis.size() != cfg.box_points ||
              gk.samples.grid.axis.box_halfwidth != cfg.box_half_width)
            fail_usage("config: kernel dump grid does not match the box section");
        } else {
          gk.samples.grid =
              TensorGrid{cfg.dim, uniform_box_rule(cfg.box_points, cfg.box_half_width)};
          std::ifstream is(*kf);
          if (!is) fail_io("config: cannot open kernel file '" + *kf + "'");
          std::vector<cplx> vals;
          std::string line;
          while (std::getline(is, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            const auto parts = split_list(line);
            if (parts.size() == 1)
              vals.emplace_back(parse_double(parts[0], "kernel sample"), 0.0);
            else if (parts.size() >= 2)
              vals.emplace_back(parse_double(parts[0], "kernel sample"),
                                parse_double(parts[1], "kernel sample"));
          }
          if (vals.size() != gk.samples.grid.size())
            fail_usage("config: kernel file sample count does not match the box grid");
          gk.samples.values = std::move(vals);
        }
        ha.kernel = std::move(gk);
        cfg.solver.nonlin = std::move(ha);
      } else {
        ha.kernel = hk;
        cfg.solver.nonlin = ha;
      }
    } else if (t == "real_entire") {
      // coefficients as "m,n,re[,im]" triples in coeff_<i> keys
      int deg = 12;
      if (const auto* dg = find(s, "nonlinearity", "degree")) deg = int(parse_int(*dg, "degree"));
      std::vector<cplx> a(std::size_t(deg + 1) * (deg + 1), cplx{});
      auto it = s.find("nonlinearity");
      if (it != s.end()) {
        for (const auto& [key, val] : it->second) {
          if (key.rfind("coeff_", 0) != 0) continue;
          const auto parts = split_list(val);
          if (parts.size() < 3) fail_usage("config: real_entire coefficient needs m,n,re[,im]");
          const int m = int(parse_int(parts[0], key));
          const int n = int(parse_int(parts[1], key));
          if (m < 0 || n < 0 || m + n > deg)
            fail_usage("config: real_entire coefficient outside degree bound");
          const double re = parse_double(parts[2], key);
          const double im = parts.size() > 3 ? parse_double(parts[3], key) : 0.0;
          a[std::size_t(m) * (deg + 1) + n] = cplx(re, im);
        }
      }
      cfg.solver.nonlin = EntireNonlin{RealEntireSeries(deg, std::move(a))};
    } else {
      fail_usage("config: unknown nonlinearity type '" + t + "'");
    }
  }

  if (const auto* v = find(s, "datum", "type")) {
    const std::string& t = *v;
    if (t == "hermite_coeffs") {
      DatumHermiteCoeffs dc;
      if (const auto* c = find(s, "datum", "coeffs")) {
        for (const std::string& item : split_list(*c)) {
          // each entry re or re:im
          const std::size_t colon = item.find(':');
          if (colon == std::string::npos)
            dc.coeffs.emplace_back(parse_double(item, "coeffs"), 0.0);
          else
            dc.coeffs.emplace_back(parse_double(item.substr(0, colon), "coeffs"),
                                   parse_double(item.substr(colon + 1), "coeffs"));
        }
      }
      if (dc.coeffs.empty()) fail_usage("config: hermite_coeffs datum needs coeffs");
      cfg.datum = std::move(dc);
    } else if (t == "gaussian") {
      DatumGaussian g;
      if (const auto* c = find(s, "datum", "center"))
        for (const std::string& item : split_list(*c)) g.center.push_back(parse_double(item, "center"));
      if (const auto* m = find(s, "datum", "momentum"))
        for (const std::string& item : split_list(*m))
          g.momentum.push_back(parse_double(item, "momentum"));
      if (const auto* w = find(s, "datum", "width")) g.width = parse_double(*w, "width");
      cfg.datum = std::move(g);
    } else if (t == "rough_example") {
      DatumRough r;
      if (const auto* q = find(s, "datum", "q")) r.q = parse_double(*q, "q");
      if (const auto* e = find(s, "datum", "epsilon")) r.epsilon = parse_double(*e, "epsilon");
      if (const auto* k = find(s, "datum", "kmax")) r.kmax = int(parse_int(*k, "kmax"));
      cfg.datum = r;
    } else if (t == "file") {
      DatumFile f;
      if (const auto* p = find(s, "datum", "path")) f.path = *p;
      if (f.path.empty()) fail_usage("config: file datum needs path");
      cfg.datum = std::move(f);
    } else {
      fail_usage("config: unknown datum type '" + t + "'");
    }
  }

  cfg.normalize();
  return cfg;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "[run]\n";
  os << "dimension = " << dim << "\n";
  os << "seed = " << seed << "\n";
  os << "output_dir = " << output_dir << "\n";
  os << "snapshot_fields = " << (snapshot_fields ? "true" : "false") << "\n";
  os << "\n[hermite]\n";
  os << "cutoff = " << resolved_cutoff() << "\n";
  os << "quad_points = " << resolved_quad_points() << "\n";
  os << "\n[box]\n";
  os << "half_width = " << fmt_double(box_half_width) << "\n";
  os << "points = " << box_points << "\n";
  os << "\n[lattice]\n";
  os << "x_step = " << fmt_double(lattice.x_step) << "\n";
  os << "y_step = " << fmt_double(lattice.y_step) << "\n";
  os << "x_extent = " << fmt_double(lattice.x_extent) << "\n";
  os << "y_extent = " << fmt_double(lattice.y_extent) << "\n";
  os << "window_width = " << fmt_double(lattice.window_width) << "\n";
  os << "quad_step = " << fmt_double(lattice.quad_step) << "\n";
  os << "\n[solver]\n";
  os << "horizon = " << fmt_double(solver.horizon) << "\n";
  os << "dt = " << fmt_double(solver.dt) << "\n";
  os << "scheme = "
     << (solver.scheme == Scheme::picard ? "picard"
                                         : solver.scheme == Scheme::lie ? "lie" : "strang")
     << "\n";
  os << "picard_iters = " << solver.picard_iters << "\n";
  os << "time_quadrature_nodes = " << solver.time_nodes << "\n";
  os << "time_samples = " << solver.time_samples << "\n";
  os << "fixed_point_tol = " << fmt_double(solver.fixed_point_tol) << "\n";
  os << "conservation_tol = " << fmt_double(solver.conservation_tol) << "\n";
  os << "linear_sign = " << solver.linear_sign << "\n";
  os << "snapshot_interval = " << fmt_double(solver.snapshot_dt) << "\n";
  os << "monitor_p = ";
  for (std::size_t i = 0; i < solver.monitor_ps.size(); ++i)
    os << (i ? "," : "") << fmt_double(solver.monitor_ps[i]);
  os << "\n";
  os << "blowup_factor = " << fmt_double(solver.blowup_factor) << "\n";
  os << "\n[nonlinearity]\n";
  if (std::holds_alternative<std::monostate>(solver.nonlin)) {
    os << "type = none\n";
  } else if (const auto* pw = std::get_if<PowerNonlin>(&solver.nonlin)) {
    os << "type = power\n";
    os << "k = " << pw->k << "\n";
    os << "sign = " << fmt_double(pw->sign) << "\n";
  } else if (const auto* ha = std::get_if<HartreeNonlin>(&solver.nonlin)) {
    os << "type = hartree\n";
    os << "k = " << ha->k << "\n";
    if (const auto* hk = std::get_if<HartreeKernel>(&ha->kernel)) {
      os << "lambda = " << fmt_double(hk->lambda) << "\n";
      os << "gamma = " << fmt_double(hk->gamma) << "\n";
    } else {
      os << "# kernel provided externally (not serializable inline)\n";
    }
  } else if (const auto* en = std::get_if<EntireNonlin>(&solver.nonlin)) {
    os << "type = real_entire\n";
    os << "degree = " << en->series.degree() << "\n";
    int idx = 0;
    for (int m = 0; m <= en->series.degree(); ++m)
      for (int n = 0; m + n <= en->series.degree(); ++n) {
        const cplx c = en->series.coeff(m, n);
        if (c == cplx{}) continue;
        os << "coeff_" << idx++ << " = " << m << "," << n << "," << fmt_double(c.real())
           << "," << fmt_double(c.imag()) << "\n";
      }
  }
  os << "\n[datum]\n";
  if (const auto* dc = std::get_if<DatumHermiteCoeffs>(&datum)) {
    os << "type = hermite_coeffs\n";
    os << "coeffs = ";
    for (std::size_t i = 0; i < dc->coeffs.size(); ++i) {
      if (i) os << ",";
      os << fmt_double(dc->coeffs[i].real());
      if (dc->coeffs[i].imag() != 0.0) os << ":" << fmt_double(dc->coeffs[i].imag());
    }
    os << "\n";
  } else if (const auto* g = std::get_if<DatumGaussian>(&datum)) {
    os << "type = gaussian\n";
    os << "center = ";
    for (int j = 0; j < dim; ++j)
      os << (j ? "," : "") << fmt_double(j < int(g->center.size()) ? g->center[j] : 0.0);
    os << "\nmomentum = ";
    for (int j = 0; j < dim; ++j)
      os << (j ? "," : "") << fmt_double(j < int(g->momentum.size()) ? g->momentum[j] : 0.0);
    os << "\nwidth = " << fmt_double(g->width) << "\n";
  } else if (const auto* r = std::get_if<DatumRough>(&datum)) {
    os << "type = rough_example\n";
    os << "q = " << fmt_double(r->q) << "\n";
    os << "epsilon = " << fmt_double(r->epsilon) << "\n";
    os << "kmax = " << r->kmax << "\n";
  } else if (const auto* f = std::get_if<DatumFile>(&datum)) {
    os << "type = file\n";
    os << "path = " << f->path << "\n";
  }
  return os.str();
}

std::string RunConfig::hash() const {
  const std::uint64_t h = fnv1a64(serialize());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hermion
