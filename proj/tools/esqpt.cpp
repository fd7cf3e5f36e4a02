// Command-line driver: stationary-point scans, spectra, level densities,
// chart-map debugging, and the verification suites.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "esqpt/csvio.hpp"
#include "esqpt/density.hpp"
#include "esqpt/hp_atlas.hpp"
#include "esqpt/quantum.hpp"
#include "esqpt/u3_solve.hpp"
#include "esqpt/verify.hpp"

namespace {

using namespace esqpt;

std::vector<double> parse_grid(const std::string& text) {
  double a = 0, b = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0 || b < a)
    throw CLI::ValidationError("grid", "expected a:b:step with step > 0 and b >= a");
  std::vector<double> g;
  for (int k = 0;; ++k) {
    const double v = a + k * step;
    if (v > b + step * 1e-9) break;
    g.push_back(std::min(v, b));
  }
  return g;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  return v;
}

std::string fmt(double v) { return CsvWriter::format(v); }

// ---------------------------------------------------------------------------
// minimal SVG line plot: rho and drho curves plus vertical guide lines

void write_svg(const std::string& path, const density::DensityCurve& c,
               const std::vector<double>& marks) {
  const int W = 900, H = 600, L = 60, B = 40;
  auto minmax = [](const std::vector<double>& v) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (hi == lo) hi = lo + 1;
    return std::pair{lo, hi};
  };
  const auto [elo, ehi] = minmax(c.grid);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open svg output: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << 2 * H / 2
      << "' viewBox='0 0 " << W << " " << H << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";

  auto panel = [&](const std::vector<double>& y, int top, const char* color, const char* label) {
    const auto [ylo, yhi] = minmax(y);
    const int ph = H / 2 - B;
    auto px = [&](double e) { return L + (e - elo) / (ehi - elo) * (W - L - 20); };
    auto py = [&](double v) { return top + ph - (v - ylo) / (yhi - ylo) * (ph - 10); };
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.2' points='";
    for (std::size_t i = 0; i < c.grid.size(); ++i) out << px(c.grid[i]) << "," << py(y[i]) << " ";
    out << "'/>\n";
    for (double m : marks)
      if (m >= elo && m <= ehi)
        out << "<line x1='" << px(m) << "' y1='" << top << "' x2='" << px(m) << "' y2='"
            << top + ph << "' stroke='gray' stroke-dasharray='4,3' stroke-width='0.8'/>\n";
    out << "<rect x='" << L << "' y='" << top << "' width='" << (W - L - 20) << "' height='" << ph
        << "' fill='none' stroke='black' stroke-width='0.8'/>\n";
    out << "<text x='" << L + 8 << "' y='" << top + 16 << "' font-size='13'>" << label
        << "</text>\n";
  };
  panel(c.rho, 10, "#1f77b4", "smoothed level density");
  panel(c.drho, H / 2 + 10, "#d62728", "derivative d rho / dE");
  out << "</svg>\n";
}

// ---------------------------------------------------------------------------

struct StationaryArgs {
  double eps = 0.0;
  std::string xi_grid;
  std::string method = "lagrange";
  std::string constraints = "n";
  double ell = 0.0;
  int starts = 2000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_stationary(const StationaryArgs& a) {
  const auto grid = parse_grid(a.xi_grid);
  SolverConfig cfg;
  cfg.n_starts = a.starts;
  cfg.seed = a.seed;

  CsvWriter csv(a.out);
  csv.meta("command", "stationary");
  csv.meta("eps", a.eps);
  csv.meta("xi_grid", a.xi_grid);
  csv.meta("method", a.method);
  csv.meta("constraints", a.constraints);
  if (a.constraints == "n+l") csv.meta("l", a.ell);
  csv.meta("starts", static_cast<long long>(a.starts));
  csv.meta("seed", static_cast<long long>(a.seed));
  csv.columns({"xi", "E", "r", "degenerate", "n0", "n1", "n2", "l", "method", "chart"});

  std::vector<std::string> footers;
  double agreement_max = 0.0;
  bool agreement_ok = true;

  for (const double xi : grid) {
    const u3::U3Params p{xi, a.eps};
    auto emit = [&](double E, int r, bool deg, const Vec& X, const std::string& method,
                    int chart) {
      const auto n = u3::occupations(X);
      csv.row({fmt(xi), fmt(E), CsvWriter::format(r), deg ? "1" : "0", fmt(n[0]), fmt(n[1]),
               fmt(n[2]), fmt(u3::angular_momentum(X)), method, CsvWriter::format(chart)});
    };

    std::vector<StationaryPoint> lag;
    if (a.method != "hp") {
      SolveStats stats;
      if (a.constraints == "n+l")
        lag = u3::find_stationary(p, a.ell, cfg, &stats);
      else
        lag = u3::find_stationary(p, cfg, &stats);
      for (const auto& pt : lag) emit(pt.energy, pt.index, pt.degenerate, pt.point, "lagrange", -1);
      if (stats.rank_deficient > 0)
        footers.push_back("xi=" + fmt(xi) + ": " + std::to_string(stats.rank_deficient) +
                          " converged starts dropped at ill-posed constraint points");
      if (a.constraints == "n") {
        const auto ms = morse_sum(lag);
        if (ms && *ms != 3)
          footers.push_back("warning: Morse sum " + std::to_string(*ms) +
                            " != 3 at xi=" + fmt(xi) + "; a stationary point may be missing");
      }
    }
    if (a.method != "lagrange") {
      if (a.constraints == "n+l")
        throw CLI::ValidationError("method", "the HP method applies to the single-constraint system");
      const auto atlas = hp::atlas_stationary(p, cfg);
      for (const auto& ap : atlas)
        emit(ap.p.energy, ap.p.index, ap.p.degenerate, hp::hp_inverse(ap.p.x), "hp", ap.chart);
      if (a.method == "both") {
        const auto agree = verify::compare_methods(p, cfg);
        agreement_ok &= agree.matched;
        agreement_max = std::max(agreement_max, agree.max_abs_de);
      }
    }
  }
  for (const auto& f : footers) csv.comment(f);
  if (a.method == "both") {
    csv.comment(std::string("agreement ") + (agreement_ok ? "ok" : "MISMATCH") +
                " max|dE|=" + fmt(agreement_max));
  }
  return 0;
}

struct SpectrumArgs {
  int N = 10;
  double xi = 0.0, eps = 0.0;
  bool blocks = false;
  std::string out;
};

int cmd_spectrum(const SpectrumArgs& a) {
  constexpr int kMaxN = 300;  // full diagonalization memory cap
  if (a.N > kMaxN) throw CLI::ValidationError("N", "N exceeds the configured cap of 300");
  if (a.blocks && a.eps != 0.0)
    throw CLI::ValidationError("blocks", "l blocks exist only at eps = 0");
  const u3::U3Params p{a.xi, a.eps};
  const auto basis = quantum::FockBasis::build(a.N);

  auto open = [&](const std::string& path) {
    CsvWriter csv(path);
    csv.meta("command", "spectrum");
    csv.meta("N", static_cast<long long>(a.N));
    csv.meta("xi", a.xi);
    csv.meta("eps", a.eps);
    return csv;
  };

  if (!a.blocks) {
    const auto spectrum = quantum::full_spectrum(p, basis);
    auto csv = open(a.out);
    csv.columns({"index", "energy_per_N"});
    for (std::size_t i = 0; i < spectrum.size(); ++i)
      csv.row({CsvWriter::format(static_cast<long long>(i)), fmt(spectrum[i])});
    return 0;
  }

  const std::filesystem::path base(a.out);
  const auto stem = (base.parent_path() / base.stem()).string();
  const auto ext = base.extension().string();
  for (const auto& blk : quantum::l2_blocks(p, basis)) {
    auto csv = open(stem + "_l" + std::to_string(blk.l) + (ext.empty() ? ".csv" : ext));
    csv.meta("l", static_cast<long long>(blk.l));
    csv.meta("ell", blk.ell);
    csv.columns({"index", "energy_per_N", "l_label"});
    for (std::size_t i = 0; i < blk.energies.size(); ++i)
      csv.row({CsvWriter::format(static_cast<long long>(i)), fmt(blk.energies[i]), fmt(blk.ell)});
  }
  return 0;
}

struct DensityArgs {
  std::string source = "quantum";
  int N = 150;
  double xi = 0.0, eps = 0.0;
  double delta = 0.0, delta2 = 0.0;
  std::string grid = "-1.1:0.9:0.004";
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  int chart = 0;
  std::string blocks_l;
  std::string out;
  std::string svg;
};

int cmd_density(const DensityArgs& a) {
  double delta = a.delta;
  if (delta <= 0.0 && a.delta2 > 0.0) delta = std::sqrt(a.delta2);
  if (delta <= 0.0) throw CLI::ValidationError("delta", "provide --delta or --delta2");
  const auto grid = parse_grid(a.grid);
  const u3::U3Params p{a.xi, a.eps};

  auto write_curve = [&](const density::DensityCurve& c, const std::string& path,
                         double extra_ell = -1.0) {
    CsvWriter csv(path);
    csv.meta("command", "density");
    csv.meta("source", a.source);
    csv.meta("xi", a.xi);
    csv.meta("eps", a.eps);
    csv.meta("delta", delta);
    csv.meta("grid", a.grid);
    if (a.source == "quantum") csv.meta("N", static_cast<long long>(a.N));
    if (a.source != "quantum") {
      csv.meta("samples", static_cast<long long>(a.samples));
      csv.meta("seed", static_cast<long long>(a.seed));
      csv.meta("shards", static_cast<long long>(density::kMcShards));
    }
    if (a.source == "weyl-chart") csv.meta("chart", static_cast<long long>(a.chart));
    if (extra_ell >= 0.0) csv.meta("ell", extra_ell);
    csv.meta("total_weight", c.total_weight);
    csv.columns({"E", "rho", "drho_dE", "sigma_rho"});
    for (std::size_t i = 0; i < c.grid.size(); ++i)
      csv.row({fmt(c.grid[i]), fmt(c.rho[i]), fmt(c.drho[i]), fmt(c.sigma[i])});
  };

  auto maybe_svg = [&](const density::DensityCurve& c) {
    if (a.svg.empty()) return;
    SolverConfig cfg;
    cfg.n_starts = 600;
    std::vector<double> marks;
    for (const auto& pt : u3::find_stationary(p, cfg)) marks.push_back(pt.energy);
    write_svg(a.svg, c, marks);
  };

  if (a.source == "weyl-chart" || a.source == "weyl-sphere") {
    const auto c = a.source == "weyl-chart"
                       ? density::weyl_density_chart(a.chart, p, a.samples, a.seed, grid, delta)
                       : density::weyl_density_sphere(p, a.samples, a.seed, grid, delta);
    write_curve(c, a.out);
    maybe_svg(c);
    return 0;
  }
  if (a.source != "quantum") throw CLI::ValidationError("source", "unknown density source");

  const auto basis = quantum::FockBasis::build(a.N);
  if (a.blocks_l.empty()) {
    const auto spectrum = quantum::full_spectrum(p, basis);
    const auto c = density::smooth_density(spectrum, delta, grid);
    write_curve(c, a.out);
    maybe_svg(c);
    return 0;
  }

  if (a.eps != 0.0) throw CLI::ValidationError("blocks-l", "l blocks exist only at eps = 0");
  const auto blocks = quantum::l2_blocks(p, basis);
  const std::filesystem::path base(a.out);
  const auto stem = (base.parent_path() / base.stem()).string();
  const auto ext = base.extension().string();
  for (const double ell : parse_list(a.blocks_l)) {
    const int l = static_cast<int>(std::lround(ell * a.N));
    const quantum::SpectrumBlock* found = nullptr;
    for (const auto& b : blocks)
      if (b.l == l) found = &b;
    if (!found) throw CLI::ValidationError("blocks-l", "no block with l = " + std::to_string(l));
    const auto c = density::smooth_density(found->energies, delta, grid);
    write_curve(c, stem + "_l" + std::to_string(l) + (ext.empty() ? ".csv" : ext), found->ell);
  }
  return 0;
}

struct HpmapArgs {
  std::string op = "forward";
  int j = 0, jp = 0;
  std::string point;
  double phase = 0.0;
};

int cmd_hpmap(const HpmapArgs& a) {
  const auto v = parse_list(a.point);
  Vec X = Eigen::Map<const Vec>(v.data(), static_cast<int>(v.size()));
  auto print = [](const char* label, const auto& vec) {
    std::cout << label << ":";
    for (int i = 0; i < vec.size(); ++i) std::cout << " " << fmt(vec[i]);
    std::cout << "\n";
  };
  if (a.op == "forward") {
    const auto x = hp::hp_forward(a.j, X);
    print("chart_point", x.coords);
    std::cout << "s2: " << fmt(x.s2()) << "\n";
  } else if (a.op == "inverse") {
    const auto Xr = hp::hp_inverse({a.j, X}, a.phase);
    print("phase_point", Xr);
  } else if (a.op == "transition") {
    const auto y = hp::hp_transition(a.jp, {a.j, X});
    print("chart_point", y.coords);
  } else {
    throw CLI::ValidationError("op", "op must be forward, inverse or transition");
  }
  return 0;
}

// Flat key=value configuration: each line names an option of the invoked
// subcommand without the leading dashes. Explicit flags win over the file.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  if (path.empty()) return args;
  if (args.size() < 2 || args[1].rfind("-", 0) == 0)
    throw std::runtime_error("--config requires a subcommand");

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::vector<std::string> merged(args.begin(), args.begin() + 2);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    merged.push_back(flag);
    if (!value.empty()) merged.push_back(value);
  }
  merged.insert(merged.end(), args.begin() + 2, args.end());
  return merged;
}

int cmd_verify(const std::string& suite) {
  const auto results = verify::run_suite(suite);
  for (const auto& r : results)
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name
              << (r.detail.empty() ? "" : "  [" + r.detail + "]") << "\n";
  const bool ok = verify::all_passed(results);
  std::cout << (ok ? "all checks passed" : "CHECKS FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationary-point and level-density analysis of constrained Hamiltonians"};
  app.require_subcommand(1);
  std::string config_path;

  StationaryArgs sa;
  auto* st = app.add_subcommand("stationary", "constrained stationary points over a xi grid");
  st->add_option("--config", config_path, "flat key=value configuration file; flags override");
  st->add_option("--eps", sa.eps, "dipole strength");
  st->add_option("--xi-grid", sa.xi_grid, "grid a:b:step")->required();
  st->add_option("--method", sa.method)->check(CLI::IsMember({"lagrange", "hp", "both"}));
  st->add_option("--constraints", sa.constraints)->check(CLI::IsMember({"n", "n+l"}));
  st->add_option("--l", sa.ell, "angular momentum value for the second constraint");
  st->add_option("--starts", sa.starts);
  st->add_option("--seed", sa.seed);
  st->add_option("--out", sa.out)->required();

  SpectrumArgs pa;
  auto* sp = app.add_subcommand("spectrum", "exact quantum spectrum at fixed N");
  sp->add_option("--config", config_path, "flat key=value configuration file; flags override");
  sp->add_option("--N", pa.N)->required();
  sp->add_option("--xi", pa.xi)->required();
  sp->add_option("--eps", pa.eps);
  sp->add_flag("--blocks", pa.blocks, "write one file per l block (eps = 0 only)");
  sp->add_option("--out", pa.out)->required();

  DensityArgs da;
  auto* de = app.add_subcommand("density", "smoothed level density curves");
  de->add_option("--config", config_path, "flat key=value configuration file; flags override");
  de->add_option("--source", da.source)
      ->check(CLI::IsMember({"quantum", "weyl-chart", "weyl-sphere"}));
  de->add_option("--N", da.N);
  de->add_option("--xi", da.xi)->required();
  de->add_option("--eps", da.eps);
  de->add_option("--delta", da.delta, "Gaussian smoothing width");
  de->add_option("--delta2", da.delta2, "Gaussian smoothing variance");
  de->add_option("--grid", da.grid, "energy grid a:b:step");
  de->add_option("--samples", da.samples, "Monte Carlo sample count");
  de->add_option("--seed", da.seed);
  de->add_option("--chart", da.chart)->check(CLI::Range(0, 2));
  de->add_option("--blocks-l", da.blocks_l, "comma list of ell values (quantum, eps = 0)");
  de->add_option("--out", da.out)->required();
  de->add_option("--svg", da.svg, "also draw rho and drho with stationary-energy guides");

  HpmapArgs ha;
  auto* hm = app.add_subcommand("hpmap", "apply a chart map to one point");
  hm->add_option("--config", config_path, "flat key=value configuration file; flags override");
  hm->add_option("--op", ha.op)->check(CLI::IsMember({"forward", "inverse", "transition"}));
  hm->add_option("--j", ha.j)->check(CLI::Range(0, 2));
  hm->add_option("--jp", ha.jp)->check(CLI::Range(0, 2));
  hm->add_option("--point", ha.point, "comma-separated coordinates")->required();
  hm->add_option("--phase", ha.phase);

  std::string suite = "all";
  auto* ve = app.add_subcommand("verify", "run verification suites");
  ve->add_option("--config", config_path, "flat key=value configuration file; flags override");
  ve->add_option("--suite", suite)->check(CLI::IsMember({"core", "atlas", "density", "all"}));

  std::vector<std::string> merged;
  try {
    merged = merge_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<const char*> cargv;
  for (const auto& s : merged) cargv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (st->parsed()) return cmd_stationary(sa);
    if (sp->parsed()) return cmd_spectrum(pa);
    if (de->parsed()) return cmd_density(da);
    if (hm->parsed()) return cmd_hpmap(ha);
    if (ve->parsed()) return cmd_verify(suite);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
