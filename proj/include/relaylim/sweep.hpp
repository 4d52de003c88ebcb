#pragma once

// Parameter sweeps over one axis, evaluated by any mix of outage and capacity
// evaluators and written as CSV. Points are evaluated concurrently; rows are
// emitted in axis order, so output is identical for any worker count.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <ios>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "relaylim/capacity.hpp"
#include "relaylim/model.hpp"
#include "relaylim/montecarlo.hpp"
#include "relaylim/outage.hpp"

namespace relaylim::sweep {

enum class Axis { snr_db, x_db, kappa, kappa_split, alpha };

enum class Evaluator {
  closed,
  quadrature,
  mc,
  capacity_exact,
  capacity_upper,
  capacity_approx,
  capacity_mc,
};

inline std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::snr_db: return "snr_db";
    case Axis::x_db: return "x_db";
    case Axis::kappa: return "kappa";
    case Axis::kappa_split: return "kappa_split";
    case Axis::alpha: return "alpha";
  }
  return "?";
}

inline std::string_view to_string(Evaluator e) {
  switch (e) {
    case Evaluator::closed: return "closed";
    case Evaluator::quadrature: return "quadrature";
    case Evaluator::mc: return "mc";
    case Evaluator::capacity_exact: return "capacity-exact";
    case Evaluator::capacity_upper: return "capacity-upper";
    case Evaluator::capacity_approx: return "capacity-approx";
    case Evaluator::capacity_mc: return "capacity-mc";
  }
  return "?";
}

inline Axis parse_axis(std::string_view s) {
  for (Axis a : {Axis::snr_db, Axis::x_db, Axis::kappa, Axis::kappa_split, Axis::alpha}) {
    if (s == to_string(a)) return a;
  }
  throw UsageError("unknown sweep axis '" + std::string(s) + "'");
}

inline Evaluator parse_evaluator(std::string_view s) {
  for (Evaluator e : {Evaluator::closed, Evaluator::quadrature, Evaluator::mc,
                      Evaluator::capacity_exact, Evaluator::capacity_upper,
                      Evaluator::capacity_approx, Evaluator::capacity_mc}) {
    if (s == to_string(e)) return e;
  }
  throw UsageError("unknown evaluator '" + std::string(s) + "'");
}

inline bool is_outage(Evaluator e) {
  return e == Evaluator::closed || e == Evaluator::quadrature || e == Evaluator::mc;
}

struct Range {
  double start = 0.0;
  double stop = 0.0;
  int steps = 2;

  double at(int i) const {
    if (i == steps - 1) return stop;
    return start + (stop - start) * i / (steps - 1);
  }
};

struct SweepSpec {
  std::string figure_id;
  Scenario base;
  Axis axis = Axis::snr_db;
  Range range;
  // Threshold for outage evaluators; the x_db axis overrides it.
  std::optional<double> x_lin;
  std::vector<Evaluator> evaluators{Evaluator::closed};
  // snr_db axis: SNR of hops 2.. is the swept value minus this offset.
  double snr_offset_db = 0.0;
  // kappa_split axis: kappa2 = kappa_total - kappa1.
  double kappa_total = 0.3;
  std::uint64_t mc_samples = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// One evaluated point.
struct Row {
  std::string figure_id;
  std::string protocol;
  std::string mode;  // "-" where not applicable
  std::string evaluator;
  std::string axis_name;
  double axis_value = 0.0;
  double snr1_db = 0.0;
  double snr2_db = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double x_lin = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kHeader =
    "figure_id,protocol,mode,evaluator,axis_name,axis_value,snr1_db,snr2_db,kappa1,kappa2,x_lin,"
    "value,std_error,n_samples,seed";

/// Shortest form with 9 significant digits, independent of the C locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, r.ptr);
}

inline void write_header(std::ostream& out) { out << kHeader << '\n'; }

inline void write_row(std::ostream& out, const Row& r) {
  out << r.figure_id << ',' << r.protocol << ',' << r.mode << ',' << r.evaluator << ','
      << r.axis_name << ',' << format_number(r.axis_value)
      << ',' << format_number(r.snr1_db) << ',' << format_number(r.snr2_db) << ','
      << format_number(r.kappa1) << ',' << format_number(r.kappa2) << ','
      << format_number(r.x_lin) << ',' << format_number(r.value) << ','
      << format_number(r.std_error) << ',' << r.n_samples << ',' << r.seed << '\n';
  if (!out) throw std::ios_base::failure("sweep: write to output failed");
}

/// Copy of `s` with every hop rescaled to the given average SNR (dB). P and N
/// are held and beta absorbs the change.
inline Scenario with_snr_db(const Scenario& s, double snr1_db, double snr_rest_db) {
  std::vector<Hop> hops;
  for (std::size_t i = 0; i < s.hops().size(); ++i) {
    const Hop& h = s.hop(i);
    const double snr = db_to_linear(i == 0 ? snr1_db : snr_rest_db);
    hops.push_back(h.with_beta(beta_for_target_snr(h, snr)));
  }
  return s.with_hops(std::move(hops));
}

inline Scenario with_kappas(const Scenario& s, double k1, double k_rest) {
  std::vector<Hop> hops;
  for (std::size_t i = 0; i < s.hops().size(); ++i) {
    hops.push_back(s.hop(i).with_kappa(i == 0 ? k1 : k_rest));
  }
  return s.with_hops(std::move(hops));
}

/// Same average SNRs with a new common shape parameter.
inline Scenario with_alpha(const Scenario& s, int alpha) {
  std::vector<Hop> hops;
  for (const Hop& h : s.hops()) {
    Hop g(h.power(), h.noise(), alpha, 1.0, h.kappa());
    hops.push_back(g.with_beta(beta_for_target_snr(g, h.average_snr())));
  }
  return s.with_hops(std::move(hops));
}

/// Scenario and threshold at one axis value.
struct Point {
  Scenario scenario;
  std::optional<double> x_lin;
};

inline Point point_at(const SweepSpec& spec, double v) {
  const Scenario& b = spec.base;
  switch (spec.axis) {
    case Axis::snr_db:
      return {with_snr_db(b, v, v - spec.snr_offset_db), spec.x_lin};
    case Axis::x_db:
      return {b, db_to_linear(v)};
    case Axis::kappa:
      return {with_kappas(b, v, v), spec.x_lin};
    case Axis::kappa_split:
      return {with_kappas(b, v, std::max(0.0, spec.kappa_total - v)), spec.x_lin};
    case Axis::alpha:
      return {with_alpha(b, static_cast<int>(std::lround(v))), spec.x_lin};
  }
  throw UsageError("sweep: bad axis");
}

/// Checks a spec before any work is done; errors name the offending field.
inline void validate_spec(const SweepSpec& spec) {
  if (spec.range.steps < 2) throw UsageError("sweep: 'steps' must be >= 2");
  if (!std::isfinite(spec.range.start) || !std::isfinite(spec.range.stop)) {
    throw UsageError("sweep: 'start'/'stop' must be finite");
  }
  if (spec.evaluators.empty()) throw UsageError("sweep: 'evaluators' must not be empty");
  bool needs_x = false;
  for (Evaluator e : spec.evaluators) {
    needs_x = needs_x || is_outage(e);
    if (e == Evaluator::capacity_approx && !spec.base.is_af()) {
      throw UsageError("sweep: evaluator 'capacity-approx' is defined for AF only");
    }
  }
  if (needs_x && spec.axis != Axis::x_db && !spec.x_lin) {
    throw UsageError("sweep: outage evaluators need a threshold ('x')");
  }
  if (spec.x_lin && !(*spec.x_lin >= 0.0)) throw UsageError("sweep: 'x' must be >= 0");
  if (spec.axis == Axis::kappa_split && spec.base.hops().size() != 2) {
    throw UsageError("sweep: axis 'kappa_split' needs exactly two hops");
  }
  if (spec.axis == Axis::kappa || spec.axis == Axis::kappa_split) {
    const double lo = std::min(spec.range.start, spec.range.stop);
    const double hi = std::max(spec.range.start, spec.range.stop);
    if (lo < 0.0) throw UsageError("sweep: 'kappa' values must be >= 0");
    if (spec.axis == Axis::kappa_split && hi > spec.kappa_total) {
      throw UsageError("sweep: 'kappa_split' range exceeds 'kappa_total'");
    }
  }
  if (spec.axis == Axis::alpha) {
    for (double v : {spec.range.start, spec.range.stop}) {
      if (v < 1.0 || v > specfun::kMaxShape) throw UsageError("sweep: 'alpha' outside [1, 64]");
    }
  }
  for (Evaluator e : spec.evaluators) {
    if ((e == Evaluator::mc || e == Evaluator::capacity_mc) && spec.mc_samples < 1000) {
      throw UsageError("sweep: 'mc_samples' must be >= 1000");
    }
  }
}

/// Evaluates one evaluator at one point. Numerical failures propagate.
inline Row evaluate(const SweepSpec& spec, const Point& p, Evaluator e, unsigned mc_workers) {
  const Scenario& s = p.scenario;
  Row r;
  r.figure_id = spec.figure_id;
  r.protocol = std::string(to_string(s.protocol()));
  r.mode = s.is_af() ? std::string(to_string(s.mode())) : "-";
  r.evaluator = std::string(to_string(e));
  r.axis_name = std::string(to_string(spec.axis));
  r.snr1_db = linear_to_db(s.hop(0).average_snr());
  r.snr2_db = linear_to_db(s.hop(1).average_snr());
  r.kappa1 = s.hop(0).kappa();
  r.kappa2 = s.hop(1).kappa();
  r.x_lin = is_outage(e) ? p.x_lin.value_or(0.0) : 0.0;
  const double x = r.x_lin;
  switch (e) {
    case Evaluator::closed:
      r.value = s.is_af() ? outage::outage_af_closed(s, x).value : outage::outage_df_closed(s, x).value;
      break;
    case Evaluator::quadrature:
      r.value = s.is_af() ? outage::outage_af_quadrature(s, x).value
                          : outage::outage_df_quadrature(s, x).value;
      break;
    case Evaluator::mc: {
      const auto est = montecarlo::estimate_outage(s, x, spec.mc_samples, spec.seed, mc_workers);
      r.value = est.value;
      r.std_error = est.std_error;
      r.n_samples = est.n;
      r.seed = spec.seed;
      break;
    }
    case Evaluator::capacity_exact:
      r.value = s.is_af() ? capacity::capacity_af_exact(s).value
                          : capacity::capacity_df_upper_exact(s).value;
      break;
    case Evaluator::capacity_upper:
      r.value = s.is_af() ? capacity::capacity_af_upper(s).value
                          : capacity::capacity_df_upper_closed(s).value;
      break;
    case Evaluator::capacity_approx:
      r.value = capacity::capacity_af_approx(s).value;
      break;
    case Evaluator::capacity_mc: {
      const auto est = montecarlo::estimate_capacity(s, spec.mc_samples, spec.seed, mc_workers);
      r.value = est.value;
      r.std_error = est.std_error;
      r.n_samples = est.n;
      r.seed = spec.seed;
      break;
    }
  }
  return r;
}

/// All rows of a sweep, ordered by axis value then evaluator.
inline std::vector<Row> evaluate_sweep(const SweepSpec& spec) {
  validate_spec(spec);
  const int steps = spec.range.steps;
  const std::size_t per_point = spec.evaluators.size();
  const std::size_t total = static_cast<std::size_t>(steps) * per_point;
  std::vector<Row> rows(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::min<unsigned>(spec.workers, total));
  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        const double v = spec.range.at(static_cast<int>(i / per_point));
        rows[i] = evaluate(spec, point_at(spec, v), spec.evaluators[i % per_point], 1);
        rows[i].axis_value = v;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

/// Writes header and rows; returns the number of data rows.
inline std::size_t run_sweep(const SweepSpec& spec, std::ostream& out, bool header = true) {
  const auto rows = evaluate_sweep(spec);
  if (header) write_header(out);
  for (const auto& r : rows) write_row(out, r);
  out.flush();
  if (!out) throw std::ios_base::failure("sweep: write to output failed");
  return rows.size();
}

}  // namespace relaylim::sweep
