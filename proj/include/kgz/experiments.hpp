#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "kgz/errors.hpp"
#include "kgz/integrator_uaosc1.hpp"
#include "kgz/integrator_uaosc2.hpp"
#include "kgz/kgz_model.hpp"
#include "kgz/zakharov_limit.hpp"

namespace kgz {

enum class Scheme { uaosc1, uaosc2 };

inline const char* scheme_name(Scheme s) { return s == Scheme::uaosc1 ? "uaosc1" : "uaosc2"; }

inline Scheme parse_scheme(const std::string& name) {
  if (name == "uaosc1") return Scheme::uaosc1;
  if (name == "uaosc2") return Scheme::uaosc2;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected uaosc1 or uaosc2)");
}

/// Number of steps of size tau covering t_end; tau must divide t_end to
/// rounding accuracy.
inline std::int64_t steps_for(double t_end, double tau) {
  if (!(tau > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("steps_for: tau and t_end must be positive");
  }
  const auto ns = static_cast<std::int64_t>(std::llround(t_end / tau));
  if (ns < 1 || std::abs(static_cast<double>(ns) * tau - t_end) > 1e-12 * std::max(t_end, 1.0)) {
    throw std::invalid_argument("tau = " + std::to_string(tau) + " does not divide t_end = " +
                                std::to_string(t_end));
  }
  return ns;
}

/// Runs fn(0..num_jobs-1) on a small worker pool. The KGZ_THREADS environment
/// variable caps the pool size. Results must be written to per-job slots so
/// scheduling cannot affect the outcome; the lowest-index exception wins.
template <typename Fn>
void parallel_for(std::size_t num_jobs, Fn&& fn) {
  if (num_jobs == 0) return;
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KGZ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) cap = static_cast<std::size_t>(v);
  }
  const std::size_t workers = std::min(cap, num_jobs);
  if (workers == 1) {
    for (std::size_t i = 0; i < num_jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(num_jobs);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= num_jobs) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// tau_j = t_end / 2^{j+2}, j = 0..6.
inline std::vector<double> default_tau_grid(double t_end) {
  std::vector<double> taus;
  for (int j = 0; j <= 6; ++j) taus.push_back(t_end / std::pow(2.0, j + 2));
  return taus;
}

/// Parameters of a convergence sweep against a fine-step self-reference.
struct SweepConfig {
  Scheme scheme = Scheme::uaosc1;
  std::vector<double> c_list;
  std::vector<double> tau_list;
  double t_end = 1.0;
  double ref_tau = 1.0 / 4096.0;  // t_end / 2^12 by default
  std::size_t num_points = 128;
  double length = 2.0 * std::numbers::pi;
  bool dealias = false;

  void validate() const {
    if (c_list.empty()) throw std::invalid_argument("SweepConfig: empty c list");
    for (double c : c_list) symbols::require_c(c);
    if (tau_list.empty()) throw std::invalid_argument("SweepConfig: empty tau list");
    double tau_min = tau_list.front();
    for (double tau : tau_list) {
      steps_for(t_end, tau);
      tau_min = std::min(tau_min, tau);
    }
    steps_for(t_end, ref_tau);
    if (!(ref_tau < tau_min / 4.0)) {
      throw std::invalid_argument("SweepConfig: ref_tau must be smaller than min(tau)/4");
    }
  }
};

struct ConvergenceRow {
  Scheme scheme;
  double c;
  double tau;
  double err_z_h1;
  double err_n_l2;
  double err_ndot;  // recorded, excluded from slope fits and CSV
};

struct SlopeEntry {
  Scheme scheme;
  double c;
  double slope;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<SlopeEntry> slopes;
};

/// Ordinary least-squares slope of log y against log x.
inline double fit_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("fit_slope: need at least 2 points");
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(points.size()), ly(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0)) {
      throw std::invalid_argument("fit_slope: points must be positive");
    }
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / static_cast<double>(points.size());
  const double my = sy / static_cast<double>(points.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (den == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return num / den;
}

namespace detail {

inline KgzState propagate_scheme(Scheme scheme, const PhysicalState& p, const ModelParams& params,
                                 double tau, std::int64_t steps) {
  if (scheme == Scheme::uaosc1) {
    return propagate1(initial_state(p, params, tau, 1), params, tau, steps);
  }
  return propagate2(initial_state(p, params, tau, 2), params, tau, steps);
}

}  // namespace detail

/// Propagates the benchmark data for every (c, tau) cell of the sweep and
/// measures (H^1, L^2) errors against the same scheme at ref_tau. Reference
/// runs and cells are independent jobs over a work queue; rows come out
/// sorted by (c, tau descending) regardless of scheduling.
inline ConvergenceReport run_convergence(const SweepConfig& cfg) {
  cfg.validate();
  const GridPtr grid = make_grid(cfg.num_points, cfg.length);

  std::vector<double> taus = cfg.tau_list;
  std::sort(taus.begin(), taus.end(), std::greater<>());

  // Phase 1: one self-reference per c.
  std::vector<KgzState> refs;
  refs.reserve(cfg.c_list.size());
  for (double c : cfg.c_list) {
    (void)c;
    refs.push_back(KgzState{SpectralField::zero(grid), SpectralField::zero(grid),
                            SpectralField::zero(grid), SpectralField::zero(grid),
                            SpectralField::zero(grid), 0.0});
  }
  parallel_for(cfg.c_list.size(), [&](std::size_t i) {
    const ModelParams params(cfg.c_list[i], grid, cfg.dealias);
    const PhysicalState p = benchmark_initial_data(grid, cfg.c_list[i]);
    refs[i] = detail::propagate_scheme(cfg.scheme, p, params, cfg.ref_tau,
                                       steps_for(cfg.t_end, cfg.ref_tau));
  });

  // Phase 2: all (c, tau) cells.
  const std::size_t cells = cfg.c_list.size() * taus.size();
  std::vector<ConvergenceRow> rows(cells);
  parallel_for(cells, [&](std::size_t idx) {
    const std::size_t ci = idx / taus.size();
    const double c = cfg.c_list[ci];
    const double tau = taus[idx % taus.size()];
    const ModelParams params(c, grid, cfg.dealias);
    const PhysicalState p = benchmark_initial_data(grid, c);
    const KgzState end =
        detail::propagate_scheme(cfg.scheme, p, params, tau, steps_for(cfg.t_end, tau));
    const KgzState& ref = refs[ci];
    const double err_z = sobolev_norm(to_physical_z(end.u) - to_physical_z(ref.u), 1.0);
    const double err_n = sobolev_norm(end.n - ref.n, 0.0);
    const double err_nd = sobolev_norm(end.ndot - ref.ndot, -1.0);
    rows[idx] = ConvergenceRow{cfg.scheme, c, tau, err_z, err_n, err_nd};
  });

  ConvergenceReport report;
  report.rows = std::move(rows);
  for (std::size_t ci = 0; ci < cfg.c_list.size(); ++ci) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
      const ConvergenceRow& r = report.rows[ci * taus.size() + ti];
      pts.emplace_back(r.tau, r.err_z_h1 + r.err_n_l2);
    }
    report.slopes.push_back(SlopeEntry{cfg.scheme, cfg.c_list[ci], fit_slope(pts)});
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const ConvergenceRow& a, const ConvergenceRow& b) {
              return a.c != b.c ? a.c < b.c : a.tau > b.tau;
            });
  std::sort(report.slopes.begin(), report.slopes.end(),
            [](const SlopeEntry& a, const SlopeEntry& b) { return a.c < b.c; });
  return report;
}

/// Asymptotic study: the first-order scheme at fixed small tau against the
/// Zakharov reference, compared through the twisted variable, for each c.
/// The Zakharov run is reused across c values whose limit data coincide
/// (the benchmark's do, for every c). The reported slope is fitted over the
/// largest four c values.
inline ConvergenceReport run_limit_study(const std::vector<double>& c_list, double tau,
                                         double zref_tau, double t_end, std::size_t num_points,
                                         double length = 2.0 * std::numbers::pi,
                                         bool dealias = false) {
  if (c_list.empty()) throw std::invalid_argument("run_limit_study: empty c list");
  for (double c : c_list) symbols::require_c(c);
  const std::int64_t ua_steps = steps_for(t_end, tau);
  const std::int64_t z_steps = steps_for(t_end, zref_tau);
  const GridPtr grid = make_grid(num_points, length);

  // Group c values by bit-identical limit initial data.
  std::vector<ZakharovState> z_init;
  std::vector<std::size_t> z_group(c_list.size());
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    const ModelParams params(c_list[i], grid, dealias);
    ZakharovState zs = limit_initial(benchmark_initial_data(grid, c_list[i]), params);
    std::size_t gi = z_init.size();
    for (std::size_t j = 0; j < z_init.size(); ++j) {
      const bool same = std::equal(zs.u_inf.coeffs().begin(), zs.u_inf.coeffs().end(),
                                   z_init[j].u_inf.coeffs().begin()) &&
                        std::equal(zs.n_inf.coeffs().begin(), zs.n_inf.coeffs().end(),
                                   z_init[j].n_inf.coeffs().begin()) &&
                        std::equal(zs.ndot_inf.coeffs().begin(), zs.ndot_inf.coeffs().end(),
                                   z_init[j].ndot_inf.coeffs().begin());
      if (same) {
        gi = j;
        break;
      }
    }
    if (gi == z_init.size()) z_init.push_back(std::move(zs));
    z_group[i] = gi;
  }

  std::vector<ZakharovState> z_final;
  for (auto& zs : z_init) z_final.push_back(zs);
  parallel_for(z_init.size(), [&](std::size_t i) {
    z_final[i] = zakharov_propagate(z_init[i], grid, zref_tau, z_steps);
  });

  std::vector<ConvergenceRow> rows(c_list.size());
  parallel_for(c_list.size(), [&](std::size_t i) {
    const double c = c_list[i];
    const ModelParams params(c, grid, dealias);
    const PhysicalState p = benchmark_initial_data(grid, c);
    const KgzState end = propagate1(initial_state(p, params, tau, 1), params, tau, ua_steps);
    const auto [err_z, err_n] = twisted_compare(end, z_final[z_group[i]], t_end, c);
    rows[i] = ConvergenceRow{Scheme::uaosc1, c, tau, err_z, err_n, 0.0};
  });
  std::sort(rows.begin(), rows.end(),
            [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.c < b.c; });

  ConvergenceReport report;
  report.rows = std::move(rows);
  if (report.rows.size() >= 2) {
    std::vector<std::pair<double, double>> pts;
    const std::size_t lo = report.rows.size() > 4 ? report.rows.size() - 4 : 0;
    for (std::size_t i = lo; i < report.rows.size(); ++i) {
      pts.emplace_back(report.rows[i].c, report.rows[i].err_z_h1);
    }
    report.slopes.push_back(SlopeEntry{Scheme::uaosc1, 0.0, fit_slope(pts)});
  }
  return report;
}

/// Deterministic CSV: fixed header, 17 significant digits, LF endings, no
/// timestamps.
inline void emit_csv(const ConvergenceReport& report, std::ostream& os) {
  os << "scheme,c,tau,err_z_h1,err_n_l2\n";
  for (const auto& r : report.rows) {
    os << scheme_name(r.scheme) << ',' << detail::format_g17(r.c) << ','
       << detail::format_g17(r.tau) << ',' << detail::format_g17(r.err_z_h1) << ','
       << detail::format_g17(r.err_n_l2) << '\n';
  }
}

inline void emit_csv(const ConvergenceReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
  emit_csv(report, os);
  if (!os.good()) throw std::runtime_error("emit_csv: write failure on '" + path + "'");
}

inline std::string csv_string(const ConvergenceReport& report) {
  std::ostringstream os;
  emit_csv(report, os);
  return os.str();
}

/// Self-reader for the schema written by emit_csv (rows only; ndot errors are
/// not serialized).
inline ConvergenceReport parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "scheme,c,tau,err_z_h1,err_n_l2") {
    throw std::invalid_argument("parse_csv: bad header");
  }
  ConvergenceReport report;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw std::invalid_argument("parse_csv: bad row '" + line + "'");
    report.rows.push_back(ConvergenceRow{parse_scheme(cells[0]), std::stod(cells[1]),
                                         std::stod(cells[2]), std::stod(cells[3]),
                                         std::stod(cells[4]), 0.0});
  }
  return report;
}

}  // namespace kgz
