// relaylim: command-line front end for outage/capacity evaluation, sweeps,
// figure recipes and the randomized validation suite.
//
// Exit codes: 0 ok, 1 usage error, 2 numerical failure, 3 validation failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "relaylim/relaylim.hpp"

namespace {

using namespace relaylim;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

template <class T>
std::vector<T> broadcast(const std::vector<T>& v, std::size_t n, const char* flag) {
  if (v.size() == 1) return std::vector<T>(n, v.front());
  if (v.size() != n) {
    throw UsageError(std::string(flag) + ": expected 1 or " + std::to_string(n) + " values");
  }
  return v;
}

sweep::SweepSpec parse_sweep(const std::string& text, Scenario base) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(':', pos);
    parts.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() != 4) throw UsageError("--sweep: expected AXIS:START:STOP:STEPS");
  sweep::SweepSpec spec{.base = std::move(base)};
  spec.axis = sweep::parse_axis(parts[0]);
  try {
    std::size_t used = 0;
    spec.range.start = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("start");
    spec.range.stop = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("stop");
    spec.range.steps = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("steps");
  } catch (const std::logic_error&) {
    throw UsageError("--sweep: START, STOP must be numbers and STEPS an integer");
  }
  return spec;
}

Scenario build_scenario(const CLI::App& app, const std::string& file, const std::string& protocol,
                        const std::string& mode, const std::vector<double>& snr_db,
                        const std::vector<int>& alpha, const std::vector<double>& kappa) {
  std::optional<Scenario> s;
  if (!file.empty()) {
    s = load_scenario(file);
  } else {
    Hop h(1.0, 1.0, 2, 1.0, 0.0);
    h = h.with_beta(beta_for_target_snr(h, db_to_linear(20.0)));
    s = Scenario({h, h}, Protocol::amplify_forward, GainMode::variable);
  }
  if (app.count("--protocol")) {
    s = Scenario(s->hops(), parse_protocol(protocol), s->mode());
  }
  if (app.count("--mode")) s = s->with_mode(parse_gain_mode(mode));

  const std::size_t n = s->hops().size();
  std::vector<Hop> hops = s->hops();
  if (app.count("--alpha")) {
    const auto a = broadcast(alpha, n, "--alpha");
    for (std::size_t i = 0; i < n; ++i) {
      Hop g(hops[i].power(), hops[i].noise(), a[i], 1.0, hops[i].kappa());
      hops[i] = g.with_beta(beta_for_target_snr(g, hops[i].average_snr()));
    }
  }
  if (app.count("--snr-db")) {
    const auto v = broadcast(snr_db, n, "--snr-db");
    for (std::size_t i = 0; i < n; ++i) {
      hops[i] = hops[i].with_beta(beta_for_target_snr(hops[i], db_to_linear(v[i])));
    }
  }
  if (app.count("--kappa")) {
    const auto v = broadcast(kappa, n, "--kappa");
    for (std::size_t i = 0; i < n; ++i) hops[i] = hops[i].with_kappa(v[i]);
  }
  return s->with_hops(std::move(hops));
}

std::vector<sweep::Evaluator> parse_evaluators(const std::vector<std::string>& names) {
  std::vector<sweep::Evaluator> out;
  for (const auto& n : names) out.push_back(sweep::parse_evaluator(n));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Outage probability and ergodic capacity of dual-hop relaying with impaired hardware"};
  app.set_version_flag("--version", "relaylim 1.0.0");

  std::string scenario_file, protocol, mode, sweep_text, out_path, figure;
  double x_db = 0.0, x_lin = 0.0, kappa_total = 0.3, mc_sigmas = 3.0, quad_tol = 1e-8;
  std::vector<double> snr_db, kappa;
  std::vector<int> alpha;
  std::vector<std::string> evals{"closed"};
  std::uint64_t mc_samples = 1000000, seed = 1;
  int validate_n = 0;
  bool saturate = false;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());

  app.add_option("--scenario", scenario_file, "Scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--protocol", protocol, "Relaying protocol: af or df");
  app.add_option("--mode", mode, "AF gain mode: fixed or variable");
  auto* xd = app.add_option("--x-db", x_db, "SNDR threshold in dB");
  auto* xl = app.add_option("--x-lin", x_lin, "SNDR threshold (linear)");
  xd->excludes(xl);
  app.add_option("--snr-db", snr_db, "Average SNR per hop in dB (A,B or one value for all)")
      ->delimiter(',');
  app.add_option("--alpha", alpha, "Nakagami shape per hop (A,B or one value)")->delimiter(',');
  app.add_option("--kappa", kappa, "Aggregate impairment level per hop (K1,K2 or one value)")
      ->delimiter(',');
  app.add_option("--sweep", sweep_text,
                 "AXIS:START:STOP:STEPS with AXIS in snr_db, x_db, kappa, kappa_split, alpha");
  app.add_option("--kappa-total", kappa_total, "kappa1 + kappa2 for the kappa_split axis");
  app.add_option("--eval", evals,
                 "Evaluators: closed, quadrature, mc, capacity-exact, capacity-upper, "
                 "capacity-approx, capacity-mc")
      ->delimiter(',');
  app.add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--workers", workers, "Worker threads");
  app.add_option("--out", out_path, "Output file (figure: output directory)");
  app.add_option("--figure", figure, "Figure recipe: fig2 ... fig7");
  app.add_option("--validate", validate_n, "Run the randomized validation suite on N scenarios");
  app.add_flag("--saturate", saturate, "Validation: draw thresholds above the SNDR ceiling");
  app.add_option("--mc-sigmas", mc_sigmas, "Validation: allowed |closed - mc| in standard errors")
      ->check(CLI::PositiveNumber);
  app.add_option("--quad-tol", quad_tol, "Validation: allowed |closed - quadrature|")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (!figure.empty()) {
    const figures::FigureOptions o{seed, mc_samples, workers};
    const auto files = figures::run_figure_recipe(figure, out_path.empty() ? "." : out_path, o);
    std::cerr << "wrote " << files.csv.string() << " (" << files.rows << " rows) and "
              << files.meta.string() << '\n';
    return 0;
  }

  std::ofstream file_out;
  if (!out_path.empty()) {
    file_out.open(out_path, std::ios::binary);
    if (!file_out) throw std::ios_base::failure("cannot open '" + out_path + "' for writing");
  }
  std::ostream& out = out_path.empty() ? std::cout : file_out;

  if (app.count("--validate")) {
    validate::ValidationOptions o;
    o.n_scenarios = validate_n;
    o.seed = seed;
    o.mc_samples = mc_samples;
    o.saturate = saturate;
    o.mc_sigmas = mc_sigmas;
    o.quadrature_tol = quad_tol;
    o.workers = workers;
    const auto rep = validate::run_validation(o);
    validate::print_report(rep, o, out);
    return rep.passed() ? 0 : kExitValidation;
  }

  const Scenario scenario =
      build_scenario(app, scenario_file, protocol, mode, snr_db, alpha, kappa);
  std::optional<double> x;
  if (app.count("--x-db")) x = db_to_linear(x_db);
  if (app.count("--x-lin")) x = x_lin;

  if (!sweep_text.empty()) {
    auto spec = parse_sweep(sweep_text, scenario);
    spec.x_lin = x;
    spec.evaluators = parse_evaluators(evals);
    spec.snr_offset_db =
        linear_to_db(scenario.hop(0).average_snr()) - linear_to_db(scenario.hop(1).average_snr());
    spec.kappa_total = kappa_total;
    spec.mc_samples = mc_samples;
    spec.seed = seed;
    spec.workers = workers;
    sweep::run_sweep(spec, out);
    return 0;
  }

  // Single point: a degenerate sweep evaluated in place.
  sweep::SweepSpec spec{.base = scenario};
  spec.x_lin = x;
  spec.evaluators = parse_evaluators(evals);
  spec.mc_samples = mc_samples;
  spec.seed = seed;
  sweep::validate_spec(spec);
  sweep::write_header(out);
  for (auto e : spec.evaluators) {
    auto row = sweep::evaluate(spec, {scenario, x}, e, workers);
    row.axis_name = "none";
    sweep::write_row(out, row);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const quadrature::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::logic_error& e) {
    // Domain and argument errors come from invalid parameter values.
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
