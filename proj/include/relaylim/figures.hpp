#pragma once

// Preset sweeps reproducing the evaluation figures. Each recipe writes
// <id>.csv (one header, all curves) and <id>.meta (plain key: value lines
// describing axes and fixed parameters).

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "relaylim/asymptotics.hpp"
#include "relaylim/sweep.hpp"

namespace relaylim::figures {

struct FigureOptions {
  std::uint64_t seed = 1;
  std::uint64_t mc_samples = 1000000;
  unsigned workers = 1;
};

struct Recipe {
  std::string id;
  std::vector<sweep::SweepSpec> sweeps;
  std::vector<sweep::Row> extra_rows;
  std::vector<std::string> meta;
};

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
  return ids;
}

/// Two hops with P = N = 1 and beta set by the average SNR.
inline Scenario symmetric_pair(Protocol p, GainMode mode, int alpha, double snr1_db,
                               double snr2_db, double kappa1, double kappa2) {
  Hop h1(1.0, 1.0, alpha, 1.0, kappa1);
  Hop h2(1.0, 1.0, alpha, 1.0, kappa2);
  h1 = h1.with_beta(beta_for_target_snr(h1, db_to_linear(snr1_db)));
  h2 = h2.with_beta(beta_for_target_snr(h2, db_to_linear(snr2_db)));
  return Scenario({h1, h2}, p, mode);
}

namespace detail {

inline sweep::SweepSpec make_spec(const std::string& id, Scenario base, sweep::Axis axis,
                                  sweep::Range range, std::optional<double> x,
                                  std::vector<sweep::Evaluator> evals, const FigureOptions& o) {
  return sweep::SweepSpec{.figure_id = id,
                          .base = std::move(base),
                          .axis = axis,
                          .range = range,
                          .x_lin = x,
                          .evaluators = std::move(evals),
                          .mc_samples = o.mc_samples,
                          .seed = o.seed,
                          .workers = o.workers};
}

struct Link {
  Protocol protocol;
  GainMode mode;
};

inline const Link kAllLinks[] = {{Protocol::amplify_forward, GainMode::fixed},
                                 {Protocol::amplify_forward, GainMode::variable},
                                 {Protocol::decode_forward, GainMode::variable}};

// Outage vs SNR at x in {3, 31}, kappa in {0, 0.1}, alpha = (2, 2).
inline Recipe outage_vs_snr(const std::string& id, Protocol p, const FigureOptions& o) {
  using sweep::Evaluator;
  Recipe r{id, {}, {}, {}};
  const std::vector<GainMode> modes =
      p == Protocol::amplify_forward ? std::vector{GainMode::fixed, GainMode::variable}
                                     : std::vector{GainMode::variable};
  for (GainMode m : modes) {
    for (double x : {3.0, 31.0}) {
      for (double k : {0.0, 0.1}) {
        r.sweeps.push_back(make_spec(id, symmetric_pair(p, m, 2, 0, 0, k, k), sweep::Axis::snr_db,
                                     {0.0, 50.0, 21}, x, {Evaluator::closed, Evaluator::mc}, o));
      }
    }
  }
  r.meta = {"title: outage probability vs average SNR (" + std::string(to_string(p)) + ")",
            "x_axis: snr_db (SNR1 = SNR2, beta scaled, P = N = 1)",
            "y_axis: outage probability",
            "alpha: 2,2",
            "kappa: 0 (ideal), 0.1 (impaired), both hops",
            "x_lin: 3, 31",
            "mu: 1"};
  return r;
}

inline Recipe shape_parameters(const FigureOptions& o) {
  using sweep::Evaluator;
  Recipe r{"fig4", {}, {}, {}};
  for (double mu : {0.2, 1.0, 5.0}) {
    // The stronger hop sits at 20 dB; SNR1 = mu SNR2.
    const double mu_db = linear_to_db(mu);
    const double snr1 = mu >= 1.0 ? 20.0 : 20.0 + mu_db;
    const double snr2 = mu >= 1.0 ? 20.0 - mu_db : 20.0;
    for (double k : {0.0, 0.1}) {
      r.sweeps.push_back(make_spec(
          "fig4", symmetric_pair(Protocol::amplify_forward, GainMode::fixed, 1, snr1, snr2, k, k),
          sweep::Axis::alpha, {1.0, 5.0, 5}, 3.0, {Evaluator::closed, Evaluator::mc}, o));
    }
  }
  r.meta = {"title: outage probability vs shape parameter, fixed-gain AF",
            "x_axis: alpha (alpha1 = alpha2, average SNRs held)",
            "y_axis: outage probability",
            "x_lin: 3",
            "mu: 0.2, 1, 5 (SNR1 = mu SNR2, max(SNR1, SNR2) = 20 dB)",
            "kappa: 0 (ideal), 0.1 (impaired), both hops"};
  return r;
}

inline Recipe capacity_vs_snr(const FigureOptions& o) {
  using sweep::Evaluator;
  Recipe r{"fig5", {}, {}, {}};
  for (double k : {0.0, 0.05, 0.15}) {
    r.sweeps.push_back(make_spec(
        "fig5", symmetric_pair(Protocol::amplify_forward, GainMode::variable, 2, 0, 0, k, k),
        sweep::Axis::snr_db, {0.0, 80.0, 17}, std::nullopt,
        {Evaluator::capacity_exact, Evaluator::capacity_upper, Evaluator::capacity_approx,
         Evaluator::capacity_mc},
        o));
  }
  r.meta = {"title: ergodic capacity vs average SNR, variable-gain AF",
            "x_axis: snr_db (SNR1 = SNR2, beta scaled, P = N = 1)",
            "y_axis: bits per channel use, prelog 0.5",
            "alpha: 2,2",
            "kappa: 0 (ideal), 0.05, 0.15, both hops",
            "mu: 1"};
  for (double k : {0.05, 0.15}) {
    const auto c = asymptotics::capacity_ceiling(Protocol::amplify_forward, k, k);
    r.meta.push_back("ceiling_kappa_" + sweep::format_number(k) + ": " +
                     sweep::format_number(c.value()));
  }
  return r;
}

inline Recipe kappa_split(const FigureOptions& o) {
  using sweep::Evaluator;
  Recipe r{"fig6", {}, {}, {}};
  const double offset = linear_to_db(2.0);
  for (double snr1 : {20.0, 30.0}) {
    for (const Link& l : kAllLinks) {
      auto spec = make_spec("fig6", symmetric_pair(l.protocol, l.mode, 2, snr1, snr1 - offset, 0, 0),
                            sweep::Axis::kappa_split, {0.0, 0.3, 31}, 15.0,
                            {Evaluator::closed, Evaluator::mc}, o);
      spec.kappa_total = 0.3;
      r.sweeps.push_back(std::move(spec));
    }
  }
  r.meta = {"title: outage probability vs first-hop impairment with kappa1 + kappa2 = 0.3",
            "x_axis: kappa_split (kappa1; kappa2 = 0.3 - kappa1)",
            "y_axis: outage probability",
            "alpha: 2,2",
            "x_lin: 15",
            "snr1_db: 20, 30",
            "mu: 2 (SNR1 = 2 SNR2)"};
  return r;
}

inline Recipe symmetric_kappa(const FigureOptions& o) {
  using sweep::Evaluator;
  Recipe r{"fig7", {}, {}, {}};
  for (double snr : {20.0, 30.0}) {
    for (const Link& l : kAllLinks) {
      r.sweeps.push_back(make_spec("fig7", symmetric_pair(l.protocol, l.mode, 2, snr, snr, 0, 0),
                                   sweep::Axis::kappa, {0.0, 0.3, 301}, 15.0,
                                   {Evaluator::closed}, o));
    }
  }
  for (Protocol p : {Protocol::amplify_forward, Protocol::decode_forward}) {
    sweep::Row m;
    m.figure_id = "fig7";
    m.protocol = std::string(to_string(p));
    m.mode = "-";
    m.evaluator = "kappa_necessary";
    m.axis_name = "kappa";
    m.axis_value = asymptotics::kappa_necessary(p, 15.0);
    m.kappa1 = m.kappa2 = m.value = m.axis_value;
    m.x_lin = 15.0;
    r.extra_rows.push_back(m);
  }
  r.meta = {"title: outage probability vs symmetric impairment level",
            "x_axis: kappa (kappa1 = kappa2)",
            "y_axis: outage probability",
            "alpha: 2,2 (assumed: shapes carried over from fig6, not restated for this figure)",
            "x_lin: 15",
            "snr_db: 20, 30 (SNR1 = SNR2)",
            "mu: 1",
            "markers: rows with evaluator kappa_necessary give the necessary upper limit on kappa"};
  return r;
}

}  // namespace detail

inline Recipe make_recipe(const std::string& id, const FigureOptions& o = {}) {
  if (id == "fig2") return detail::outage_vs_snr(id, Protocol::amplify_forward, o);
  if (id == "fig3") return detail::outage_vs_snr(id, Protocol::decode_forward, o);
  if (id == "fig4") return detail::shape_parameters(o);
  if (id == "fig5") return detail::capacity_vs_snr(o);
  if (id == "fig6") return detail::kappa_split(o);
  if (id == "fig7") return detail::symmetric_kappa(o);
  throw UsageError("unknown figure '" + id + "' (expected fig2 ... fig7)");
}

/// Writes the recipe's CSV to `csv` and returns the number of data rows.
inline std::size_t write_recipe_csv(const Recipe& r, std::ostream& csv) {
  sweep::write_header(csv);
  std::size_t n = 0;
  for (const auto& spec : r.sweeps) n += sweep::run_sweep(spec, csv, false);
  for (const auto& row : r.extra_rows) {
    sweep::write_row(csv, row);
    ++n;
  }
  return n;
}

inline void write_recipe_meta(const Recipe& r, const FigureOptions& o, std::ostream& meta) {
  meta << "figure_id: " << r.id << '\n';
  for (const auto& line : r.meta) meta << line << '\n';
  meta << "seed: " << o.seed << '\n';
  meta << "mc_samples: " << o.mc_samples << '\n';
  meta << "columns: " << sweep::kHeader << '\n';
}

struct FigureFiles {
  std::filesystem::path csv;
  std::filesystem::path meta;
  std::size_t rows = 0;
};

inline FigureFiles run_figure_recipe(const std::string& id, const std::filesystem::path& out_dir,
                                     const FigureOptions& o = {}) {
  const Recipe r = make_recipe(id, o);
  std::filesystem::create_directories(out_dir);
  FigureFiles files{out_dir / (id + ".csv"), out_dir / (id + ".meta"), 0};
  // Build in memory first so a failed run leaves no partial file behind.
  std::ostringstream csv;
  files.rows = write_recipe_csv(r, csv);
  std::ofstream c(files.csv, std::ios::binary);
  std::ofstream m(files.meta, std::ios::binary);
  if (!c || !m) throw std::ios_base::failure("figure: cannot write to " + out_dir.string());
  c << csv.str();
  write_recipe_meta(r, o, m);
  if (!c || !m) throw std::ios_base::failure("figure: write failed in " + out_dir.string());
  return files;
}

}  // namespace relaylim::figures
