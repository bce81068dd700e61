#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "floquet/matrices.hpp"
#include "floquet/output.hpp"
#include "floquet/reconstruct.hpp"
#include "floquet/symbol.hpp"
#include "floquet/transform.hpp"
#include "floquet/verification.hpp"

namespace floquet::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string out = ".";
  std::string format = "csv,json";
  int grid = 512;
  int jobs = 1;
  std::uint64_t seed = 20240601;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--format", c.format, "Comma-separated subset of csv,json,svg");
  app->add_option("--grid", c.grid, "Band grid size")->check(CLI::PositiveNumber);
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Seed for randomized checks");
}

OutputFormats parse_formats(const std::string& list) {
  OutputFormats f{false, false, false};
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv")
      f.csv = true;
    else if (item == "json")
      f.json = true;
    else if (item == "svg")
      f.svg = true;
    else
      throw std::invalid_argument("unknown format '" + item + "' (expected csv, json, svg)");
  }
  return f;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
  return out;
}

std::string bands_summary(const BandStructure& bs, const AssumptionReport& rep) {
  using nlohmann::json;
  const auto r = [](double x) { return std::strtod(format_number(x).c_str(), nullptr); };
  json ranges = json::array(), gaps = json::array();
  for (int p = 0; p < bs.k; ++p) ranges.push_back(json{{"band", p + 1}, {"min", r(bs.band_min(p))}, {"max", r(bs.band_max(p))}});
  for (const auto& [lo, hi] : detect_gaps(bs, RVector(), 0.0).gaps) gaps.push_back(json{{"lo", r(lo)}, {"hi", r(hi)}});
  json s{{"k", bs.k},
         {"grid", bs.grid_size()},
         {"bands", ranges},
         {"gaps", gaps},
         {"assumptions",
          {{"bands_disjoint", rep.bands_disjoint},
           {"no_van_hove", rep.no_van_hove},
           {"hermitian", rep.hermitian},
           {"min_band_separation", std::isfinite(rep.min_band_separation) ? json(r(rep.min_band_separation)) : json(nullptr)},
           {"min_interior_derivative", r(rep.min_interior_derivative)}}}};
  return s.dump(2) + "\n";
}

std::string bands_svg(const BandStructure& bs) {
  SvgPlot plot("band functions", "alpha", "lambda");
  for (int p = 0; p < bs.k; ++p) {
    std::vector<double> y;
    for (int j = 0; j < bs.grid_size(); ++j) y.push_back(bs.values(p, j));
    plot.add_polyline(bs.grid, y, "#1f77b4");
  }
  return plot.render();
}

int cmd_bands(const std::string& symbol, const Common& c, std::ostream& out) {
  const OutputFormats f = parse_formats(c.format);
  const Symbol sym = resolve_symbol(symbol);
  const BandStructure bs = band_functions(sym, c.grid);
  const AssumptionReport rep = check_assumptions(bs, 1e-6, &sym);
  if (f.csv) {
    auto os = open_out(c.out, "bands.csv");
    write_bands_csv(os, bs);
  }
  if (f.json) open_out(c.out, "summary.json") << bands_summary(bs, rep);
  if (f.svg) open_out(c.out, "bands.svg") << bands_svg(bs);
  const auto gaps = detect_gaps(bs, RVector(), 0.0).gaps;
  out << "bands: k=" << bs.k << " grid=" << bs.grid_size() << " gaps=" << gaps.size();
  for (const auto& [lo, hi] : gaps) out << " (" << format_number(lo) << ", " << format_number(hi) << ")";
  out << " assumptions=" << (rep.all_passed() ? "ok" : "violated") << '\n';
  return kOk;
}

struct ReconstructFlags {
  std::string config, scenario, symbol, variant, matrix, reference;
  int m = 0, k = 0, defect_index = 0;
  double delta = 0, d = 0, s1 = 0, s2 = 0, gap_margin = 0, ipr_factor = 0;
};

int cmd_reconstruct(CLI::App* sub, const ReconstructFlags& fl, const Common& c, std::ostream& out) {
  const OutputFormats f = parse_formats(c.format);
  ScenarioConfig cfg = fl.config.empty() ? ScenarioConfig{} : scenario_config_from_json(slurp(fl.config));
  const auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--scenario")) cfg.scenario = scenario_from_string(fl.scenario);
  if (given("--m")) cfg.m = fl.m;
  if (given("--k")) cfg.k = fl.k;
  if (given("--symbol")) cfg.symbol = fl.symbol;
  if (given("--variant")) cfg.variant = fl.variant;
  if (given("--matrix")) cfg.matrix_path = fl.matrix;
  if (given("--reference-symbol")) cfg.reference_symbol = fl.reference;
  if (given("--delta")) cfg.delta = fl.delta;
  if (given("--d")) cfg.d = fl.d;
  if (given("--s1")) cfg.s1 = fl.s1;
  if (given("--s2")) cfg.s2 = fl.s2;
  if (given("--defect-index")) cfg.defect_index = fl.defect_index;
  if (given("--gap-margin")) cfg.gap_margin = fl.gap_margin;
  if (given("--ipr-factor")) cfg.reconstruct.ipr_factor = fl.ipr_factor;
  if (given("--grid")) cfg.grid = c.grid;
  if (given("--jobs")) cfg.reconstruct.jobs = c.jobs;
  if (cfg.scenario == Scenario::external_matrix && cfg.matrix_path.empty())
    throw std::invalid_argument("external_matrix needs --matrix");

  const ScenarioBundle b = run_scenario(cfg);
  write_bundle(c.out, b, f);
  int localized = 0;
  for (const auto& p : b.points) localized += p.localized;
  out << to_string(cfg.scenario) << ": n=" << b.dimension << " k=" << b.k << " localized=" << localized
      << " gaps=" << b.gaps.gaps.size() << " gap_modes=" << b.gaps.gap_modes.size();
  if (b.comparison) out << " bulk_max_error=" << format_number(b.comparison->bulk.max);
  out << '\n';
  return kOk;
}

CVector read_vector(const std::string& path) {
  std::string text = slurp(path);
  std::replace(text.begin(), text.end(), '\n', ',');
  std::vector<Complex> xs;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
    xs.push_back(parse_complex(cell));
  }
  if (xs.empty()) throw std::runtime_error("vector file is empty");
  return Eigen::Map<CVector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

int cmd_transform(const std::string& input, int k, const Common& c, std::ostream& out) {
  const OutputFormats f = parse_formats(c.format);
  CVector u = read_vector(input);
  const double norm = u.norm();
  if (norm == 0.0) throw std::invalid_argument("zero vector");
  u = zero_pad(u / norm, k);
  const auto prof = projection_profile(u, k);
  const int m = static_cast<int>(prof.size());
  const double q = discrete_quasiperiodicity(u, k);
  if (f.csv) {
    auto os = open_out(c.out, "transform.csv");
    os << "bin,alpha,weight\n";
    for (int i = 0; i < m; ++i) {
      const int j = (i + m - m / 2) % m;  // ascending alpha
      os << j << ',' << format_number(bin_alpha(j, m)) << ',' << format_number(prof[j]) << '\n';
    }
  }
  if (f.json) {
    nlohmann::json s{{"k", k}, {"m", m}, {"input_norm", std::strtod(format_number(norm).c_str(), nullptr)},
                     {"Q", std::strtod(format_number(q).c_str(), nullptr)}};
    open_out(c.out, "transform.json") << s.dump(2) << '\n';
  }
  if (f.svg) {
    SvgPlot plot("projection profile", "alpha", "weight");
    std::vector<double> x, y;
    for (int i = 0; i < m; ++i) {
      const int j = (i + m - m / 2) % m;
      x.push_back(bin_alpha(j, m));
      y.push_back(prof[j]);
    }
    plot.add_polyline(x, y, "#1f77b4");
    plot.add_points(x, y, "#1f77b4", 2.0);
    open_out(c.out, "transform.svg") << plot.render();
  }
  out << "transform: m=" << m << " k=" << k << " Q=" << format_number(q) << '\n';
  return kOk;
}

int cmd_verify(const std::vector<std::string>& only, double scale, const Common& c, std::ostream& out) {
  static const std::vector<std::string> groups = {"symbol", "matrices", "transform", "spectra",
                                                  "reconstruct", "cli", "acceptance"};
  for (const auto& g : only)
    if (std::find(groups.begin(), groups.end(), g) == groups.end())
      throw std::invalid_argument("unknown check group '" + g + "'");
  CheckContext ctx;
  ctx.seed = c.seed;
  ctx.tolerance_scale = scale;
  const auto records = run_checks(ctx, only);
  print_check_table(out, records);
  const bool ok = std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.passed; });
  return ok ? kOk : kCheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Band structure reconstruction from finite truncations", "floquet"};
  app.require_subcommand(1);

  Common bc, rc, tc, vc;
  std::string symbol;
  auto* bands = app.add_subcommand("bands", "Sample the band functions of a symbol");
  bands->add_option("--symbol", symbol, "Inline JSON, symbol file, or monomer|dimer|exponential")->required();
  bc.grid = 256;
  add_common(bands, bc);

  ReconstructFlags fl;
  auto* rec = app.add_subcommand("reconstruct", "Run a reconstruction scenario");
  rec->add_option("--config", fl.config, "Scenario JSON file (flags override it)");
  rec->add_option("--scenario", fl.scenario,
                  "periodic_nn|periodic_symbol|ssh|dislocated|compact_defect|external_matrix");
  rec->add_option("--m", fl.m, "Cells, dimers per side, or dimers");
  rec->add_option("--k", fl.k, "Block size");
  rec->add_option("--symbol", fl.symbol, "Symbol for periodic_symbol");
  rec->add_option("--variant", fl.variant, "capacitance|toeplitz|circulant");
  rec->add_option("--matrix", fl.matrix, "Matrix file (CSV or JSON)");
  rec->add_option("--reference-symbol", fl.reference, "Reference symbol for external_matrix");
  rec->add_option("--delta", fl.delta, "Compact defect strength");
  rec->add_option("--d", fl.d, "Dislocation spacing");
  rec->add_option("--s1", fl.s1, "Intra-dimer spacing");
  rec->add_option("--s2", fl.s2, "Inter-dimer spacing");
  rec->add_option("--defect-index", fl.defect_index, "1-based defect position");
  rec->add_option("--gap-margin", fl.gap_margin, "Gap shrink margin");
  rec->add_option("--ipr-factor", fl.ipr_factor, "Localization threshold over the median ipr");
  add_common(rec, rc);

  std::string input;
  int k = 1;
  auto* tr = app.add_subcommand("transform", "Projection profile of a vector");
  tr->add_option("--input", input, "Vector file, one entry per line or comma-separated")->required();
  tr->add_option("--k", k, "Block size")->check(CLI::PositiveNumber);
  add_common(tr, tc);

  std::vector<std::string> only;
  double scale = 1.0;
  auto* ver = app.add_subcommand("verify", "Run the invariant and acceptance checks");
  ver->add_option("--only", only, "Restrict to groups")->delimiter(',');
  ver->add_option("--tolerance-scale", scale, "Multiply every check tolerance");
  add_common(ver, vc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }

  try {
    if (bands->parsed()) return cmd_bands(symbol, bc, out);
    if (rec->parsed()) return cmd_reconstruct(rec, fl, rc, out);
    if (tr->parsed()) return cmd_transform(input, k, tc, out);
    if (ver->parsed()) return cmd_verify(only, scale, vc, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kValidationFailure;
}

}  // namespace floquet::cli
