#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "floquet/output.hpp"
#include "floquet/reconstruct.hpp"

namespace floquet {

using nlohmann::json;

namespace {

const char* const kScenarioNames[] = {"periodic_nn", "periodic_symbol", "ssh",
                                      "dislocated", "compact_defect", "external_matrix"};

// Rounds to the printed 15 significant digits so JSON output matches the CSV text.
double num(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

Symbol monomer_or_throw(double a0, double a1, double am1) {
  if (a1 != am1) throw std::invalid_argument("periodic_nn needs a1 == am1 for a Hermitian symbol");
  return monomer_symbol(a0, a1);
}

FiniteMatrix periodic_section(const Symbol& sym, const std::string& variant, int m) {
  if (variant == "toeplitz") return toeplitz_matrix(sym, m);
  if (variant == "circulant") return circulant_matrix(sym, m);
  throw std::invalid_argument("unknown variant '" + variant + "'");
}

int positive(const json& j, const char* key) {
  const int v = j.at(key).get<int>();
  if (v < 1) throw std::invalid_argument(std::string(key) + " must be positive");
  return v;
}

json stats_json(const ErrorStats& s) {
  return json{{"count", s.count}, {"max", num(s.max)}, {"mean", num(s.mean)},
              {"median", num(s.median)}, {"q90", num(s.q90)}};
}

}  // namespace

std::string to_string(Scenario s) { return kScenarioNames[static_cast<int>(s)]; }

Scenario scenario_from_string(const std::string& name) {
  for (int i = 0; i < 6; ++i)
    if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

Symbol resolve_symbol(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::invalid_argument("empty symbol specification");
  if (spec[first] == '{') return symbol_from_json(spec);
  if (spec == "monomer") return monomer_symbol(2.0, -1.0);
  if (spec == "dimer") return dimer_chain_symbol(1.0, 2.0);
  if (spec == "exponential") return exponential_symbol();
  return load_symbol(spec);
}

Symbol ssh_bulk_symbol(const SshParameters& p) {
  CMatrix a0(2, 2), a1 = CMatrix::Zero(2, 2);
  a0 << p.alpha, p.beta1, p.beta1, p.alpha;
  a1(0, 1) = p.beta2;
  return Symbol::from_nonnegative(2, {{0, a0}, {1, a1}});
}

ScenarioConfig scenario_config_from_json(const std::string& text) {
  static const std::set<std::string> known = {
      "scenario", "m", "variant", "a0", "a1", "am1", "symbol", "s1", "s2", "d", "delta",
      "defect_index", "ssh", "matrix", "reference_symbol", "k", "grid", "gap_margin",
      "ipr_factor", "jobs"};
  ScenarioConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items())
      if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    if (j.contains("scenario")) c.scenario = scenario_from_string(j["scenario"].get<std::string>());
    if (j.contains("m")) c.m = j["m"].get<int>();
    if (j.contains("variant")) c.variant = j["variant"].get<std::string>();
    if (j.contains("a0")) c.a0 = j["a0"].get<double>();
    if (j.contains("a1")) c.a1 = j["a1"].get<double>();
    if (j.contains("am1")) c.am1 = j["am1"].get<double>();
    if (j.contains("symbol"))
      c.symbol = j["symbol"].is_string() ? j["symbol"].get<std::string>() : j["symbol"].dump();
    if (j.contains("s1")) c.s1 = j["s1"].get<double>();
    if (j.contains("s2")) c.s2 = j["s2"].get<double>();
    if (j.contains("d")) c.d = j["d"].get<double>();
    if (j.contains("delta")) c.delta = j["delta"].get<double>();
    if (j.contains("defect_index")) c.defect_index = j["defect_index"].get<int>();
    if (j.contains("ssh")) {
      const auto& s = j["ssh"];
      SshParameters p;
      p.alpha_tilde = s.at("alpha_tilde").get<double>();
      p.alpha = s.at("alpha").get<double>();
      p.eta = s.at("eta").get<double>();
      p.beta1 = s.at("beta1").get<double>();
      p.beta2 = s.at("beta2").get<double>();
      c.ssh = p;
    }
    if (j.contains("matrix")) c.matrix_path = j["matrix"].get<std::string>();
    if (j.contains("reference_symbol")) {
      const auto& r = j["reference_symbol"];
      c.reference_symbol = r.is_string() ? r.get<std::string>() : r.dump();
    }
    if (j.contains("k")) c.k = j["k"].get<int>();
    if (j.contains("grid")) c.grid = j["grid"].get<int>();
    if (j.contains("gap_margin")) c.gap_margin = j["gap_margin"].get<double>();
    if (j.contains("ipr_factor")) c.reconstruct.ipr_factor = j["ipr_factor"].get<double>();
    if (j.contains("jobs")) c.reconstruct.jobs = j["jobs"].get<int>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid config: ") + e.what());
  }
  return c;
}

ScenarioBundle run_scenario(const ScenarioConfig& config) {
  ScenarioBundle b;
  b.config = config;
  const auto& c = config;
  if (c.m && *c.m < 1) throw std::invalid_argument("m must be positive");
  if (c.grid < 16) throw std::invalid_argument("grid must be at least 16");
  if (c.reconstruct.jobs < 1) throw std::invalid_argument("jobs must be positive");
  if (c.k && *c.k < 1) throw std::invalid_argument("k must be positive");

  std::optional<Symbol> reference;
  std::optional<FiniteMatrix> matrix;
  std::optional<PerturbedMatrix> perturbed;

  switch (c.scenario) {
    case Scenario::periodic_nn: {
      const int m = c.m.value_or(80);
      const std::string variant = c.variant.empty() ? "capacitance" : c.variant;
      reference = monomer_or_throw(c.a0, c.a1, c.am1);
      matrix = variant == "capacitance" ? capacitance_1d(c.a0, c.a1, c.am1, m)
                                        : periodic_section(*reference, variant, m);
      b.k = 1;
      b.cells = m;
      break;
    }
    case Scenario::periodic_symbol: {
      if (c.symbol.empty()) throw std::invalid_argument("periodic_symbol needs a symbol");
      reference = resolve_symbol(c.symbol);
      const int m = c.m.value_or(30);
      matrix = periodic_section(*reference, c.variant.empty() ? "toeplitz" : c.variant, m);
      b.k = reference->k();
      b.cells = m;
      break;
    }
    case Scenario::ssh: {
      const int m = c.m.value_or(20);
      const SshParameters p = c.ssh.value_or(SshParameters::from_spacings(c.s1, c.s2));
      matrix = ssh_matrix(p, m);
      reference = ssh_bulk_symbol(p);
      b.k = 2;
      b.cells = 2 * m + 1;
      break;
    }
    case Scenario::dislocated: {
      const int m = c.m.value_or(10);
      matrix = dislocated_chain(c.s1, c.s2, c.d, m);
      reference = dimer_chain_symbol(c.s1, c.s2);
      b.k = 2;
      b.cells = 2 * m;
      break;
    }
    case Scenario::compact_defect: {
      const int m = c.m.value_or(40);
      const FiniteMatrix chain = chain_capacitance(dimer_spacings(c.s1, c.s2, m));
      perturbed = compact_perturbation(chain, c.defect_index.value_or(center_index(chain.size())), c.delta);
      reference = dimer_chain_symbol(c.s1, c.s2);
      b.k = 2;
      b.cells = m;
      break;
    }
    case Scenario::external_matrix: {
      if (c.matrix_path.empty()) throw std::invalid_argument("external_matrix needs a matrix path");
      const int k = c.k.value_or(1);
      matrix = load_matrix(c.matrix_path, k);
      if (!matrix->hermitian()) throw std::invalid_argument("external matrix is not Hermitian");
      if (!c.reference_symbol.empty()) {
        reference = resolve_symbol(c.reference_symbol);
        if (reference->k() != k) throw std::invalid_argument("reference symbol block size differs from k");
      }
      b.k = k;
      b.cells = static_cast<int>((matrix->size() + k - 1) / k);
      break;
    }
  }
  if (c.k && c.scenario != Scenario::external_matrix && *c.k != b.k)
    throw std::invalid_argument("k does not match the scenario block size");

  if (perturbed) {
    b.provenance = perturbed->product.provenance();
    b.dimension = perturbed->product.size();
    b.eigen = perturbed_eigen(*perturbed);
  } else {
    b.provenance = matrix->provenance();
    b.dimension = matrix->size();
    b.eigen = hermitian_eigen(*matrix);
  }
  b.points = reconstruct_from_eigen(b.eigen, b.k, c.reconstruct);

  if (reference) {
    b.bands = band_functions(*reference, c.grid);
    b.gap_margin = c.gap_margin.value_or(default_gap_margin(*b.bands));
    b.gaps = detect_gaps(*b.bands, b.eigen.values, b.gap_margin, &b.points);
    for (const auto& g : b.gaps.gap_modes) b.points[g.index].localized = true;
    b.comparison = compare_to_symbol(b.points, *b.bands, b.cells);
  }
  return b;
}

FiniteMatrix matrix_from_descriptor(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    const std::string type = j.at("type").get<std::string>();
    if (type == "toeplitz" || type == "circulant") {
      const json& s = j.at("symbol");
      const Symbol sym = resolve_symbol(s.is_string() ? s.get<std::string>() : s.dump());
      const int m = positive(j, "m");
      return type == "toeplitz" ? toeplitz_matrix(sym, m) : circulant_matrix(sym, m);
    }
    if (type == "capacitance1d")
      return capacitance_1d(j.at("a0").get<double>(), j.at("a1").get<double>(),
                            j.at("am1").get<double>(), positive(j, "m"));
    if (type == "chain") return chain_capacitance(j.at("spacings").get<std::vector<double>>());
    if (type == "ssh") {
      SshParameters p;
      if (j.contains("s1") || j.contains("s2"))
        p = SshParameters::from_spacings(j.value("s1", 1.0), j.value("s2", 2.0));
      p.alpha_tilde = j.value("alpha_tilde", p.alpha_tilde);
      p.alpha = j.value("alpha", p.alpha);
      p.eta = j.value("eta", p.eta);
      p.beta1 = j.value("beta1", p.beta1);
      p.beta2 = j.value("beta2", p.beta2);
      return ssh_matrix(p, positive(j, "m"));
    }
    if (type == "dislocated")
      return dislocated_chain(j.at("s1").get<double>(), j.at("s2").get<double>(),
                              j.at("d").get<double>(), positive(j, "dimers_per_side"));
    if (type == "dimer_chain")
      return chain_capacitance(dimer_spacings(j.at("s1").get<double>(), j.at("s2").get<double>(),
                                              positive(j, "dimers")));
    throw std::invalid_argument("unknown matrix type '" + type + "'");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid matrix descriptor: ") + e.what());
  }
}

void write_points_csv(std::ostream& os, const std::vector<ReconstructionPoint>& points) {
  os << "index,alpha_est,lambda,sup_ratio,ipr,localized,band_error\n";
  for (const auto& p : points) {
    os << p.index + 1 << ',' << format_number(p.alpha_est) << ',' << format_number(p.lambda) << ','
       << format_number(p.sup_ratio) << ',' << format_number(p.ipr) << ',' << (p.localized ? 1 : 0)
       << ',';
    if (p.band_error) os << format_number(*p.band_error);
    os << '\n';
  }
}

std::string gaps_to_json(const GapReport& gaps) {
  json g = json::array(), modes = json::array();
  for (const auto& [lo, hi] : gaps.gaps) g.push_back(json{{"lo", num(lo)}, {"hi", num(hi)}});
  for (const auto& m : gaps.gap_modes)
    modes.push_back(json{{"index", m.index + 1}, {"lambda", num(m.lambda)}, {"alpha_est", num(m.alpha_est)}});
  return json{{"gaps", g}, {"gap_modes", modes}}.dump(2) + "\n";
}

std::string summary_to_json(const ScenarioBundle& b) {
  int localized = 0;
  for (const auto& p : b.points) localized += p.localized;
  json s{{"scenario", to_string(b.config.scenario)},
         {"provenance", b.provenance},
         {"dimension", b.dimension},
         {"k", b.k},
         {"cells", b.cells},
         {"eigenpairs", b.points.size()},
         {"localized", localized},
         {"gaps", b.gaps.gaps.size()},
         {"gap_modes", b.gaps.gap_modes.size()}};
  if (b.bands) {
    s["grid"] = b.bands->grid_size();
    s["gap_margin"] = num(b.gap_margin);
  }
  if (b.comparison) {
    s["edge_exclusion"] = num(b.comparison->edge_exclusion);
    s["error"] = json{{"delocalized", stats_json(b.comparison->delocalized)},
                      {"bulk", stats_json(b.comparison->bulk)},
                      {"localized", stats_json(b.comparison->localized)}};
  }
  return s.dump(2) + "\n";
}

std::string overlay_svg(const ScenarioBundle& b) {
  SvgPlot plot(to_string(b.config.scenario), "alpha", "lambda");
  if (b.bands) {
    // Bands on [0, pi], the range of alpha_est.
    for (int p = 0; p < b.bands->k; ++p) {
      std::vector<double> x, y;
      for (int j = 0; j < b.bands->grid_size(); ++j) {
        const double a = b.bands->grid[j];
        if (a < 0.0) continue;
        x.push_back(a);
        y.push_back(b.bands->values(p, j));
      }
      x.push_back(kPi);
      y.push_back(b.bands->interpolate(p, kPi));
      plot.add_polyline(x, y, "#1f77b4");
    }
  }
  std::vector<double> xd, yd, xl, yl;
  for (const auto& p : b.points) {
    (p.localized ? xl : xd).push_back(p.alpha_est);
    (p.localized ? yl : yd).push_back(p.lambda);
  }
  plot.add_points(xd, yd, "#2ca02c");
  plot.add_points(xl, yl, "#d62728", 4.0);
  return plot.render();
}

void write_bundle(const std::string& dir, const ScenarioBundle& b, const OutputFormats& f) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    return out;
  };
  if (f.csv) {
    auto out = open("points.csv");
    write_points_csv(out, b.points);
    if (b.bands) {
      auto bands = open("bands.csv");
      write_bands_csv(bands, *b.bands);
    }
  }
  if (f.json) {
    open("gaps.json") << gaps_to_json(b.gaps);
    open("summary.json") << summary_to_json(b);
  }
  if (f.svg) open("reconstruct.svg") << overlay_svg(b);
}

}  // namespace floquet
