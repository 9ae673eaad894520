// Command-line front end: single simulations, convergence sweeps, the
// Zakharov-limit study and the built-in property suites.
//
// Exit codes: 0 success, 1 validation/usage error, 2 numerical divergence.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgz/errors.hpp"
#include "kgz/experiments.hpp"
#include "kgz/integrator_uaosc1.hpp"
#include "kgz/integrator_uaosc2.hpp"
#include "kgz/kgz_model.hpp"
#include "kgz/selftest.hpp"

namespace {

struct CommonOptions {
  std::size_t modes = 128;
  double length = 2.0 * std::numbers::pi;
  bool dealias = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--modes", opts.modes, "Grid size N (even)")->capture_default_str();
  cmd->add_option("--length", opts.length, "Torus length")->capture_default_str();
  cmd->add_flag("--dealias", opts.dealias, "Apply the 2/3 rule to pointwise products");
  cmd->set_config("--config", "", "Key-value config file mirroring this subcommand's flags (flags win)");
  cmd->allow_config_extras(CLI::config_extras_mode::error);
}

void write_report(const kgz::ConvergenceReport& report, const std::string& out_path) {
  if (out_path.empty()) {
    kgz::emit_csv(report, std::cout);
  } else {
    kgz::emit_csv(report, out_path);
  }
  for (const auto& s : report.slopes) {
    std::ostringstream line;
    line << "slope " << kgz::scheme_name(s.scheme);
    if (s.c > 0.0) line << " c=" << s.c;
    line << ": " << s.slope;
    std::cerr << line.str() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniformly accurate oscillatory integrators for the 1-D Klein-Gordon-Zakharov system"};
  app.require_subcommand(1);

  // --- simulate ---------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "Propagate one (c, tau) cell and write a state snapshot");
  std::string sim_scheme = "uaosc1";
  double sim_c = 1.0, sim_tau = 0.01, sim_t_end = 1.0;
  std::string sim_out, sim_initial;
  CommonOptions sim_opts;
  sim->add_option("--scheme", sim_scheme, "uaosc1 or uaosc2")->capture_default_str();
  sim->add_option("--c", sim_c, "Plasma frequency (>= 1)")->capture_default_str();
  sim->add_option("--tau", sim_tau, "Time step; must divide t-end")->capture_default_str();
  sim->add_option("--t-end", sim_t_end, "Final time")->capture_default_str();
  sim->add_option("--out", sim_out, "Snapshot CSV path (stdout when omitted)");
  sim->add_option("--initial", sim_initial,
                  "CSV of physical samples x,z,zdot,n,ndot on the exact grid "
                  "(benchmark data when omitted)");
  add_common(sim, sim_opts);

  // --- convergence ------------------------------------------------------
  auto* conv = app.add_subcommand("convergence", "Error-versus-tau sweep against a fine self-reference");
  std::string conv_scheme = "uaosc1";
  std::vector<double> conv_c_list{1.0, 32.0, 1024.0};
  std::vector<double> conv_tau_list;
  double conv_t_end = 1.0, conv_ref_tau = 0.0;
  std::string conv_out;
  CommonOptions conv_opts;
  conv->add_option("--scheme", conv_scheme, "uaosc1 or uaosc2")->capture_default_str();
  conv->add_option("--c-list", conv_c_list, "Plasma frequencies")->delimiter(',')->capture_default_str();
  conv->add_option("--tau-list", conv_tau_list, "Step sizes (default t_end/2^{j+2}, j=0..6)")
      ->delimiter(',');
  conv->add_option("--t-end", conv_t_end, "Final time")->capture_default_str();
  conv->add_option("--ref-tau", conv_ref_tau, "Self-reference step (default t_end/2^12)");
  conv->add_option("--out", conv_out, "Report CSV path (stdout when omitted)");
  add_common(conv, conv_opts);

  // --- limit ------------------------------------------------------------
  auto* lim = app.add_subcommand("limit", "Asymptotic error versus c against the Zakharov limit");
  std::vector<double> lim_c_list{64.0, 128.0, 256.0, 512.0, 1024.0};
  double lim_tau = 2e-5, lim_zref_tau = 1e-5, lim_t_end = 1.0;
  std::string lim_out;
  CommonOptions lim_opts;
  lim->add_option("--c-list", lim_c_list, "Plasma frequencies")->delimiter(',')->capture_default_str();
  lim->add_option("--tau", lim_tau, "Oscillatory-integrator step")->capture_default_str();
  lim->add_option("--zref-tau", lim_zref_tau, "Zakharov reference step")->capture_default_str();
  lim->add_option("--t-end", lim_t_end, "Final time")->capture_default_str();
  lim->add_option("--out", lim_out, "Report CSV path (stdout when omitted)");
  add_common(lim, lim_opts);

  // --- selftest -----------------------------------------------------------
  auto* self = app.add_subcommand("selftest", "Run the built-in property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      const kgz::Scheme scheme = kgz::parse_scheme(sim_scheme);
      const auto steps = kgz::steps_for(sim_t_end, sim_tau);
      const kgz::GridPtr grid = kgz::make_grid(sim_opts.modes, sim_opts.length);
      const kgz::ModelParams params(sim_c, grid, sim_opts.dealias);
      kgz::PhysicalState p = [&] {
        if (sim_initial.empty()) return kgz::benchmark_initial_data(grid, sim_c);
        std::ifstream in(sim_initial);
        if (!in) throw std::invalid_argument("cannot open initial data file '" + sim_initial + "'");
        return kgz::read_initial_csv(in, grid);
      }();
      const kgz::KgzState end = kgz::detail::propagate_scheme(scheme, p, params, sim_tau, steps);
      if (sim_out.empty()) {
        kgz::write_snapshot_csv(std::cout, end);
      } else {
        std::ofstream out(sim_out, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open '" + sim_out + "' for writing");
        kgz::write_snapshot_csv(out, end);
      }
      std::cerr << "propagated " << steps << " steps of " << kgz::scheme_name(scheme)
                << " to t = " << end.time << '\n';
      return 0;
    }

    if (conv->parsed()) {
      kgz::SweepConfig cfg;
      cfg.scheme = kgz::parse_scheme(conv_scheme);
      cfg.c_list = conv_c_list;
      cfg.t_end = conv_t_end;
      cfg.tau_list = conv_tau_list.empty() ? kgz::default_tau_grid(conv_t_end) : conv_tau_list;
      cfg.ref_tau = conv_ref_tau > 0.0 ? conv_ref_tau : conv_t_end / 4096.0;
      cfg.num_points = conv_opts.modes;
      cfg.length = conv_opts.length;
      cfg.dealias = conv_opts.dealias;
      write_report(kgz::run_convergence(cfg), conv_out);
      return 0;
    }

    if (lim->parsed()) {
      write_report(kgz::run_limit_study(lim_c_list, lim_tau, lim_zref_tau, lim_t_end,
                                        lim_opts.modes, lim_opts.length, lim_opts.dealias),
                   lim_out);
      return 0;
    }

    if (self->parsed()) {
      bool all_pass = true;
      for (const auto& r : kgz::run_selftests()) {
        std::printf("%-26s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL");
        if (!r.pass) {
          std::printf("    %s\n", r.detail.c_str());
          all_pass = false;
        }
      }
      return all_pass ? 0 : 1;
    }
  } catch (const kgz::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
