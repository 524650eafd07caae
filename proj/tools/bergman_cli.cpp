// Command-line driver: spec ingestion, pipeline orchestration and report emission.
//
// Every command writes schema-versioned JSON (and CSV where tabular) into --out, prints a
// short summary, and exits 0 when all verdicts pass, 1 when one fails, 2 on bad input.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "bergman/chsc.hpp"
#include "bergman/coefficients.hpp"
#include "bergman/growth.hpp"
#include "bergman/hash.hpp"
#include "bergman/kernel_eval.hpp"
#include "bergman/series_io.hpp"
#include "bergman/transport.hpp"

using namespace bergman;
using json = nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string preset;
  std::string spec_path;
  std::optional<unsigned> trunc_degree;
  unsigned M = 4;
  std::vector<unsigned> k_grid;
  std::optional<double> radius;
  unsigned grid = 5;
  std::optional<double> C;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  // command specific
  std::optional<double> delta;
  std::size_t samples = 2000;
  std::vector<std::string> xs, ys;
  std::optional<unsigned> N;
  std::size_t pairs = 4;
  std::string u = "0.1", v = "0.05";
  double threshold = -1.8;
  double scaling_threshold = -1.35;
  std::string mode = "all";
  unsigned worst_M = 5, kmax = 4;
  unsigned max_xi = 2;
  std::size_t chsc_n = 1;
  std::string chsc_c = "1";

  json knobs() const {
    json j{{"command", command}, {"M", M}, {"grid", grid}, {"seed", seed}};
    j["preset"] = preset.empty() ? json(nullptr) : json(preset);
    j["spec_path"] = spec_path.empty() ? json(nullptr) : json(spec_path);
    j["trunc_degree"] = trunc_degree ? json(*trunc_degree) : json(nullptr);
    j["radius"] = radius ? json(*radius) : json(nullptr);
    j["C"] = C ? json(*C) : json(nullptr);
    j["k"] = k_grid;
    if (command == "polarize") {
      j["delta"] = delta ? json(*delta) : json(nullptr);
      j["samples"] = samples;
    } else if (command == "eval") {
      j["x"] = xs;
      j["y"] = ys;
      j["N"] = N ? json(*N) : json(nullptr);
    } else if (command == "asymptotics") {
      j["pairs"] = pairs;
      j["u"] = u;
      j["v"] = v;
      j["delta"] = delta ? json(*delta) : json(nullptr);
      j["threshold"] = threshold;
      j["scaling_threshold"] = scaling_threshold;
    } else if (command == "growth") {
      j["mode"] = mode;
      j["worst_M"] = worst_M;
      j["kmax"] = kmax;
    } else if (command == "coeffs") {
      j["max_xi"] = max_xi;
    } else if (command == "chsc-check") {
      j["n"] = chsc_n;
      j["c"] = chsc_c;
    }
    return j;
  }
};

PotentialSpec load_spec(const RunConfig& cfg) {
  if (cfg.preset.empty() == cfg.spec_path.empty()) throw InputError("give exactly one of --preset or --spec");
  PotentialSpec spec;
  if (!cfg.preset.empty()) {
    spec = preset_potential(cfg.preset, cfg.trunc_degree.value_or(2 * cfg.M + 6));
  } else {
    std::ifstream in(cfg.spec_path);
    if (!in) throw InputError("cannot read spec file '" + cfg.spec_path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InputError("spec file '" + cfg.spec_path + "' is not valid JSON: " + e.what());
    }
    spec = potential_from_json(j);
    if (cfg.trunc_degree) spec.trunc_degree = *cfg.trunc_degree;
  }
  if (cfg.radius) spec.eval_radius = *cfg.radius;
  validate(spec);
  return spec;
}

std::complex<double> parse_complex(const std::string& s) {
  // "re" or "re:im"
  const auto colon = s.find(':');
  try {
    std::size_t used = 0;
    const double re = std::stod(s.substr(0, colon), &used);
    if (used != (colon == std::string::npos ? s.size() : colon)) throw std::invalid_argument(s);
    if (colon == std::string::npos) return {re, 0.0};
    const std::string tail = s.substr(colon + 1);
    const double im = std::stod(tail, &used);
    if (used != tail.size()) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::exception&) {
    throw InputError("cannot parse complex coordinate '" + s + "' (expected re or re:im)");
  }
}

Point parse_point(const std::string& s, std::size_t n) {
  Point p;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) p.push_back(parse_complex(part));
  if (p.size() != n) throw InputError("point '" + s + "' needs " + std::to_string(n) + " coordinates");
  return p;
}

class Output {
 public:
  Output(const RunConfig& cfg, const PotentialSpec* spec) : dir_(cfg.out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) throw InputError("output directory '" + dir_.string() + "' is not usable");
    header_ = {{"schema_version", kSchemaVersion}, {"command", cfg.command}, {"config", cfg.knobs()}};
    std::string hashed = cfg.knobs().dump();
    if (spec) {
      header_["spec"] = potential_to_json(*spec);
      header_["spec_hash"] = potential_hash(*spec);
      hashed += header_["spec"].dump();
    }
    header_["run_hash"] = fnv1a_hex(hashed);
  }

  void write_json(const std::string& name, const json& body) const {
    json doc = header_;
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    write_text(name, doc.dump(2) + "\n");
  }

  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw InputError("cannot write '" + (dir_ / name).string() + "'");
    out << text;
  }

  const json& header() const { return header_; }

 private:
  std::filesystem::path dir_;
  json header_;
};

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

int finish(bool ok, const std::string& what) {
  std::cout << what << ": " << verdict(ok) << "\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- polarize

int cmd_polarize(const RunConfig& cfg) {
  const auto spec = load_spec(cfg);
  const auto geom = build_geometry(spec);
  const double delta = cfg.delta.value_or(0.5 * hessian_min_eigenvalue(spec));
  const auto contour = check_good_contour(spec, to_float(geom.psi), cfg.samples, delta);
  auto vec = [](const std::vector<RationalSeries>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(series_to_json(s));
    return a;
  };
  auto pt = [](const Point& p) {
    json a = json::array();
    for (const auto& c : p) a.push_back({c.real(), c.imag()});
    return a;
  };
  Output out(cfg, &spec);
  out.write_json("polarize.json",
                 {{"geometry",
                   {{"psi", series_to_json(geom.psi)},
                    {"psi_x", vec(geom.psi_x)},
                    {"theta", vec(geom.theta)},
                    {"z_of_theta", vec(geom.z_of_theta)},
                    {"delta0_xyz", series_to_json(geom.delta0_xyz)},
                    {"delta0_xytheta", series_to_json(geom.delta0_xytheta)}}},
                  {"good_contour",
                   {{"delta", contour.delta},
                    {"samples", contour.samples},
                    {"radius", contour.radius},
                    {"tolerance", contour.tolerance},
                    {"max_value", contour.max_value},
                    {"worst_x", pt(contour.worst_x)},
                    {"worst_y", pt(contour.worst_y)},
                    {"verdict", verdict(contour.pass)}}}});
  return finish(contour.pass, "good contour");
}

// ---------------------------------------------------------------- coeffs

int cmd_coeffs(const RunConfig& cfg) {
  const auto spec = load_spec(cfg);
  if (spec.trunc_degree < required_trunc_degree(cfg.M)) {
    throw DegreeBudgetError(required_trunc_degree(cfg.M), "coefficients up to order " + std::to_string(cfg.M));
  }
  const auto geom = build_geometry(spec);
  GeometryCompositions comps(geom);
  auto table = bbs_recursion(geom, cfg.M, comps);
  amplitude_from_b(table, geom, comps);
  const auto chain = build_transport_chain(geom, cfg.M, comps);
  const auto yreports = y_independence_check(geom, comps, chain);

  json cross = json::array();
  bool ok = true;
  for (unsigned m = 0; m <= cfg.M; ++m) {
    const bool eq = chain.b.at(m) == table.b.at(m);
    ok = ok && eq;
    cross.push_back({{"m", m}, {"verdict", verdict(eq)}});
  }
  json yind = json::array();
  for (const auto& r : yreports) {
    ok = ok && r.y_free && r.matches_b;
    yind.push_back({{"order", r.order},
                    {"checked_degree", r.checked_degree},
                    {"y_free", r.y_free},
                    {"matches_b", r.matches_b}});
  }
  const auto norms = derivative_norm_table(table, spec.eval_radius, cfg.grid, cfg.max_xi);

  const std::string hash = potential_hash(spec);
  Output out(cfg, &spec);
  out.write_json("coefficients.json", coefficients_to_json(table, hash));
  out.write_json("transport.json", transport_to_json(chain, hash));
  out.write_json("cross_check.json",
                 {{"cross_check", cross}, {"y_independence", yind}, {"verdict", verdict(ok)}});
  out.write_text("norms.csv", norms.to_csv());
  json consts = json::array();
  for (const auto& b : table.b) consts.push_back(b.constant_term().get_str());
  std::cout << "b_m(0) = " << consts.dump() << "\n";
  return finish(ok, "transport cross-check");
}

// ---------------------------------------------------------------- shared model setup

struct Pipeline {
  PotentialSpec spec;
  GeometryPack geom;
  CoefficientTable table;
  KernelModel model;
  double C = 1.0;
  std::string C_source;
};

Pipeline build_pipeline(const RunConfig& cfg) {
  Pipeline p{load_spec(cfg), {}, {}, {}, 1.0, ""};
  if (p.spec.trunc_degree < required_trunc_degree(cfg.M)) {
    throw DegreeBudgetError(required_trunc_degree(cfg.M), "coefficients up to order " + std::to_string(cfg.M));
  }
  p.geom = build_geometry(p.spec);
  p.table = bbs_recursion(p.geom, cfg.M);
  p.model = series_kernel_model(p.geom, p.table, p.spec.eval_radius);
  if (cfg.C) {
    if (!(*cfg.C > 0)) throw InputError("--C must be positive");
    p.C = *cfg.C;
    p.C_source = "override";
  } else {
    p.C_source = "default (no growth to fit)";
    try {
      const auto fit = fit_growth(derivative_norm_table(p.table, p.spec.eval_radius, cfg.grid, 0),
                                  GrowthModel::FactorialSquared);
      if (fit.verdict == "PASS" || fit.verdict == "FAIL") {
        p.C = fit.fitted_C;
        p.C_source = "fitted";
      }
    } catch (const std::invalid_argument&) {
      // Too few positive orders to fit; keep C = 1.
    }
  }
  return p;
}

// Exact kernel for the model spaces, when the spec is one of them.
std::optional<std::complex<double>> oracle_kernel(const RunConfig& cfg, std::size_t n, unsigned k, const Point& x,
                                                  const Point& y) {
  if (cfg.preset.rfind("flat(", 0) == 0) return exact_flat_kernel(n, k, x, y);
  if (cfg.preset == "chsc(" + std::to_string(n) + ",1)") return exact_cpn_kernel(n, k, x, y);
  return std::nullopt;
}

// ---------------------------------------------------------------- eval

int cmd_eval(const RunConfig& cfg) {
  if (cfg.k_grid.empty()) throw InputError("eval needs --k");
  if (cfg.xs.empty() || cfg.xs.size() != cfg.ys.size()) throw InputError("eval needs matching --x and --y lists");
  const auto p = build_pipeline(cfg);
  json reports = json::array();
  for (std::size_t i = 0; i < cfg.xs.size(); ++i) {
    const Point x = parse_point(cfg.xs[i], p.spec.n), y = parse_point(cfg.ys[i], p.spec.n);
    for (unsigned k : cfg.k_grid) {
      const auto choice = choose_N0(k, p.C, p.table.max_order);
      const unsigned N = cfg.N.value_or(choice.N);
      if (N > p.table.max_order) throw InputError("--N exceeds the computed order M");
      KernelReport r;
      try {
        r = eval_KN(p.model, k, N, x, y);
      } catch (const std::out_of_range& e) {
        throw InputError(e.what());
      }
      json rj = report_to_json(r);
      rj["N0_clamped"] = !cfg.N && choice.clamped;
      if (const auto exact = oracle_kernel(cfg, p.spec.n, k, x, y)) {
        rj["oracle"] = {exact->real(), exact->imag()};
        rj["oracle_rel_error"] = std::abs(r.K_val - *exact) / std::abs(*exact);
      }
      reports.push_back(rj);
    }
  }
  Output out(cfg, &p.spec);
  out.write_json("eval.json", {{"C", p.C}, {"C_source", p.C_source}, {"reports", reports}});
  std::cout << "wrote " << reports.size() << " kernel reports\n";
  return 0;
}

// ---------------------------------------------------------------- asymptotics

int cmd_asymptotics(const RunConfig& cfg) {
  auto p = build_pipeline(cfg);
  std::vector<unsigned> ks = cfg.k_grid;
  if (ks.empty()) {
    for (unsigned k = 64; k <= 4096; k *= 2) ks.push_back(k);
  }
  const double delta = cfg.delta.value_or(1.0);
  // Pairs close to the origin and to each other so D(x,y) stays within delta / (2 sqrt k).
  std::mt19937_64 rng(cfg.seed);
  const double r = std::min(0.05, p.spec.eval_radius / 2);
  std::uniform_real_distribution<double> rad(0.0, r), ang(0.0, 2 * std::numbers::pi);
  std::vector<std::pair<Point, Point>> pairs;
  for (std::size_t i = 0; i < cfg.pairs; ++i) {
    Point x(p.spec.n), y(p.spec.n);
    for (std::size_t j = 0; j < p.spec.n; ++j) {
      x[j] = std::polar(rad(rng), ang(rng));
      y[j] = x[j] + std::polar(rad(rng) / 2, ang(rng));
    }
    pairs.emplace_back(std::move(x), std::move(y));
  }
  const auto logrep = log_asymptotic_check(p.model, ks, pairs, p.C, delta, cfg.threshold);
  const auto u = parse_point(cfg.u, p.spec.n), v = parse_point(cfg.v, p.spec.n);
  DecayReport scal;
  try {
    scal = scaling_check(p.model, ks, u, v, p.C, cfg.scaling_threshold);
  } catch (const std::out_of_range& e) {
    throw InputError(e.what());
  }

  std::string csv = "check,pair,k,N,residual\n";
  char buf[160];
  auto dump = [&](const DecayReport& rep) {
    for (std::size_t i = 0; i < rep.fits.size(); ++i) {
      const auto& f = rep.fits[i];
      for (std::size_t j = 0; j < f.ks.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%u,%u,%.17g\n", rep.check.c_str(), i, f.ks[j], f.Ns[j], f.residuals[j]);
        csv += buf;
      }
    }
  };
  dump(logrep);
  dump(scal);

  const bool ok = logrep.pass && scal.pass;
  Output out(cfg, &p.spec);
  out.write_json("asymptotics.json", {{"C", p.C},
                                      {"C_source", p.C_source},
                                      {"delta", delta},
                                      {"log_asymptotic", decay_to_json(logrep)},
                                      {"scaling", decay_to_json(scal)},
                                      {"verdict", verdict(ok)}});
  out.write_text("residuals.csv", csv);
  std::cout << "log-asymptotic: " << verdict(logrep.pass) << ", scaling: " << verdict(scal.pass) << "\n";
  return finish(ok, "asymptotics");
}

// ---------------------------------------------------------------- growth

int cmd_growth(const RunConfig& cfg) {
  const bool want_fit = cfg.mode == "all" || cfg.mode == "fit";
  const bool want_worst = cfg.mode == "all" || cfg.mode == "worst-case";
  const bool want_trunc = cfg.mode == "all" || cfg.mode == "truncation";
  if (!want_fit && !want_worst && !want_trunc) throw InputError("--mode must be all, fit, worst-case or truncation");

  std::optional<PotentialSpec> spec;
  json body;
  bool ok = true;
  std::string csv_norms, csv_bounds;
  if (want_fit) {
    spec = load_spec(cfg);
    if (spec->trunc_degree < required_trunc_degree(cfg.M)) {
      throw DegreeBudgetError(required_trunc_degree(cfg.M), "coefficients up to order " + std::to_string(cfg.M));
    }
    const auto table = bbs_recursion(build_geometry(*spec), cfg.M);
    const auto norms = derivative_norm_table(table, spec->eval_radius, cfg.grid, 0);
    csv_norms = norms.to_csv();
    const auto sq = fit_growth(norms, GrowthModel::FactorialSquared);
    json fits = {{"m_factorial_sq", growth_fit_to_json(sq)}};
    // The single-factorial model is evidence only and does not enter the verdict.
    try {
      fits["m_factorial"] = growth_fit_to_json(fit_growth(norms, GrowthModel::Factorial));
    } catch (const std::invalid_argument& e) {
      fits["m_factorial"] = {{"verdict", "not fitted"}, {"reason", e.what()}};
    }
    body["growth_fit"] = fits;
    ok = ok && sq.acceptable();
    std::cout << "m!^2 growth fit: " << sq.verdict << "\n";
  }
  if (want_worst) {
    const auto table = worst_case_recursion(1, cfg.worst_M, cfg.kmax);
    const unsigned fact_m = std::min(4u, cfg.worst_M);
    const auto rows = worst_case_lower_bounds(table, fact_m, std::min(4u, cfg.kmax), cfg.worst_M);
    bool bounds_ok = worst_case_monotone(table);
    for (const auto& r : rows) bounds_ok = bounds_ok && r.pass;
    csv_bounds = lower_bounds_csv(rows);
    body["worst_case"] = {{"M", cfg.worst_M},
                          {"Kmax", cfg.kmax},
                          {"monotone_in_m", worst_case_monotone(table)},
                          {"bounds", lower_bounds_to_json(rows)},
                          {"verdict", verdict(bounds_ok)}};
    ok = ok && bounds_ok;
    std::cout << "worst-case lower bounds: " << verdict(bounds_ok) << "\n";
  }
  if (want_trunc) {
    json mins = json::array();
    bool trunc_ok = true;
    for (double C : {1.0, 4.0}) {
      for (unsigned k : {64u, 100u, 1024u}) {
        const auto r = truncation_minimizer(C, k);
        trunc_ok = trunc_ok && r.pass();
        mins.push_back(minimizer_to_json(r));
      }
    }
    const auto lemma = exp_factorial_lemma_check({0.1, 0.5, 1.0, 2.0}, 20, 10000);
    trunc_ok = trunc_ok && lemma.pass();
    body["truncation"] = {{"minimizer", mins}, {"lemma", lemma_to_json(lemma)}, {"verdict", verdict(trunc_ok)}};
    ok = ok && trunc_ok;
    std::cout << "truncation rules: " << verdict(trunc_ok) << "\n";
  }
  body["verdict"] = verdict(ok);
  Output out(cfg, spec ? &*spec : nullptr);
  out.write_json("growth.json", body);
  if (!csv_norms.empty()) out.write_text("norms.csv", csv_norms);
  if (!csv_bounds.empty()) out.write_text("worst_case.csv", csv_bounds);
  return finish(ok, "growth");
}

// ---------------------------------------------------------------- chsc-check

int cmd_chsc_check(const RunConfig& cfg) {
  Rational c;
  try {
    c = parse_rational(cfg.chsc_c);
  } catch (const std::exception&) {
    throw InputError("cannot parse --c '" + cfg.chsc_c + "'");
  }
  if (cfg.M < cfg.chsc_n) throw InputError("-M must be at least --n for the polynomial check");
  const auto model = make_chsc_model(cfg.chsc_n, c, cfg.M);
  const bool poly = chsc_polynomial_check(model);
  const auto spec = chsc_potential(cfg.chsc_n, c, cfg.trunc_degree.value_or(required_trunc_degree(cfg.M)));
  validate(spec);
  if (spec.trunc_degree < required_trunc_degree(cfg.M)) {
    throw DegreeBudgetError(required_trunc_degree(cfg.M), "coefficients up to order " + std::to_string(cfg.M));
  }
  const auto table = bbs_recursion(build_geometry(spec), cfg.M);
  bool cross = true;
  for (unsigned m = 0; m <= cfg.M; ++m) {
    const auto& s = table.b[m];
    const bool constant = s.is_zero() || (s.size() == 1 && s.max_degree() == 0);
    cross = cross && constant && s.constant_term() == model.b[m];
  }
  json b = json::array();
  for (const auto& q : model.b) b.push_back(q.get_str());
  Output out(cfg, &spec);
  out.write_json("chsc_check.json", {{"n", cfg.chsc_n},
                                     {"c", c.get_str()},
                                     {"M", cfg.M},
                                     {"b", b},
                                     {"polynomial_check", verdict(poly)},
                                     {"cross_check_vs_bbs", verdict(cross)}});
  std::cout << "b = " << b.dump() << "\n";
  return finish(poly && cross, "chsc check");
}

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_spec = true) {
  if (needs_spec) {
    sub->add_option("--preset", cfg.preset, "flat(n), chsc(n,c) or quartic(n,t)");
    sub->add_option("--spec", cfg.spec_path, "potential JSON file");
    sub->add_option("-D,--trunc-degree", cfg.trunc_degree, "truncation degree (preset default 2M+6)");
    sub->add_option("--radius", cfg.radius, "evaluation / norm radius");
  }
  sub->add_option("-M,--order", cfg.M, "highest coefficient order")->capture_default_str();
  sub->add_option("-o,--out", cfg.out_dir, "output directory")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "seed for sampled points")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-diagonal Bergman kernel expansion toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* pol = app.add_subcommand("polarize", "polarization, phase, Delta0 and a good-contour sweep");
  add_common(pol, cfg);
  pol->add_option("--delta", cfg.delta, "contour constant (default half the smallest Hessian eigenvalue)");
  pol->add_option("--samples", cfg.samples, "contour sample pairs")->capture_default_str();

  auto* coe = app.add_subcommand("coeffs", "coefficients b_m, transport chain and their cross-check");
  add_common(coe, cfg);
  coe->add_option("--grid", cfg.grid, "torus grid points per variable")->capture_default_str();
  coe->add_option("--max-xi", cfg.max_xi, "largest derivative order in the norm table")->capture_default_str();

  auto* ev = app.add_subcommand("eval", "evaluate the truncated kernel");
  add_common(ev, cfg);
  ev->add_option("--k", cfg.k_grid, "levels")->delimiter(',');
  ev->add_option("--x", cfg.xs, "points as re[:im] coordinates joined by ','");
  ev->add_option("--y", cfg.ys, "points as re[:im] coordinates joined by ','");
  ev->add_option("--N", cfg.N, "truncation order (default floor(sqrt(k/C)))");
  ev->add_option("--C", cfg.C, "growth constant (default fitted)");
  ev->add_option("--grid", cfg.grid, "torus grid for the C fit")->capture_default_str();

  auto* as = app.add_subcommand("asymptotics", "decay of the log-kernel and scaling-window residuals");
  add_common(as, cfg);
  as->add_option("--k", cfg.k_grid, "levels (default 64,128,...,4096)")->delimiter(',');
  as->add_option("--C", cfg.C, "growth constant (default fitted)");
  as->add_option("--grid", cfg.grid, "torus grid for the C fit")->capture_default_str();
  as->add_option("--pairs", cfg.pairs, "number of sampled point pairs")->capture_default_str();
  as->add_option("--delta", cfg.delta, "admissibility constant (default 1)");
  as->add_option("--u", cfg.u, "scaling-window point u")->capture_default_str();
  as->add_option("--v", cfg.v, "scaling-window point v")->capture_default_str();
  as->add_option("--threshold", cfg.threshold, "largest accepted log-asymptotic slope")->capture_default_str();
  as->add_option("--scaling-threshold", cfg.scaling_threshold, "largest accepted scaling slope")
      ->capture_default_str();

  auto* gr = app.add_subcommand("growth", "growth fits, worst-case recursion and truncation rules");
  add_common(gr, cfg);
  gr->add_option("--grid", cfg.grid, "torus grid points per variable")->capture_default_str();
  gr->add_option("--mode", cfg.mode, "all, fit, worst-case or truncation")->capture_default_str();
  gr->add_option("--worst-M", cfg.worst_M, "orders in the worst-case recursion")->capture_default_str();
  gr->add_option("--kmax", cfg.kmax, "largest k in b_{m, k e1}")->capture_default_str();

  auto* ch = app.add_subcommand("chsc-check", "closed-form constant-curvature coefficients");
  add_common(ch, cfg, false);
  ch->add_option("--n", cfg.chsc_n, "dimension")->capture_default_str();
  ch->add_option("--c", cfg.chsc_c, "curvature (rational)")->capture_default_str();
  ch->add_option("-D,--trunc-degree", cfg.trunc_degree, "truncation degree for the recursion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*pol) return cfg.command = "polarize", cmd_polarize(cfg);
    if (*coe) return cfg.command = "coeffs", cmd_coeffs(cfg);
    if (*ev) return cfg.command = "eval", cmd_eval(cfg);
    if (*as) return cfg.command = "asymptotics", cmd_asymptotics(cfg);
    if (*gr) return cfg.command = "growth", cmd_growth(cfg);
    if (*ch) return cfg.command = "chsc-check", cmd_chsc_check(cfg);
  } catch (const SpecError& e) {
    std::cerr << "error: invalid potential, " << e.what() << "\n";
    return 2;
  } catch (const DegreeBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
