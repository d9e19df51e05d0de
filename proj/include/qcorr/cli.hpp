#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qcorr/format.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/report.hpp"
#include "qcorr/states.hpp"
#include "qcorr/sweep.hpp"
#include "qcorr/version.hpp"

namespace qcorr::cli {

/// Exit codes: 0 success, 2 usage or precondition violation, 3 numeric failure.
inline int exit_code_for(const std::exception& e) {
  return dynamic_cast<const numeric_error*>(&e) != nullptr ? 3 : 2;
}

/// Loads a 4x4 density matrix stored as 32 whitespace-separated reals
/// (row-major re/im pairs) and validates it.
inline DensityMatrix<4> load_state_file(const std::string& path, double psd_tol) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file '" + path + "'");
  std::vector<double> vals;
  double v = 0.0;
  while (in >> v) vals.push_back(v);
  if (!in.eof()) throw std::invalid_argument("state file '" + path + "' contains non-numeric data");
  if (vals.size() != 32) {
    throw std::invalid_argument("state file '" + path +
                                "' must hold exactly 32 numbers (16 re/im pairs, row-major)");
  }
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const std::size_t at = 2 * static_cast<std::size_t>(4 * i + j);
      m(i, j) = cplx{vals[at], vals[at + 1]};
    }
  return DensityMatrix<4>::from_matrix(m, psd_tol);
}

/// Rejects construction parameters the named family does not take.
inline void reject_extra_params(const std::string& name, const StateParams& p) {
  const StateFamily fam = state_family(name);
  auto bad = [&name](bool needed, const std::optional<double>& v, const char* flag) {
    if (!needed && v) {
      throw std::invalid_argument("state '" + name + "' takes no parameter " + flag);
    }
  };
  bad(fam.needs_p, p.p, "p");
  bad(fam.needs_q, p.q, "q");
  bad(fam.needs_n, p.n, "n");
  bad(fam.needs_k, p.k, "k");
}

namespace detail {

struct StateFlags {
  std::string state;
  StateParams params;
  std::string path;
};

struct Knobs {
  double zero_tol = kDiscordZeroTol;
  double psd_tol = kPsdTol;
  int grid_n = 64;
  int refine_iters = 500;

  ReportOptions report_options() const {
    if (!(zero_tol > 0.0)) throw std::invalid_argument("--zero-tol must be > 0");
    if (!(psd_tol > 0.0)) throw std::invalid_argument("--psd-tol must be > 0");
    if (grid_n < 2) throw std::invalid_argument("--grid must be >= 2");
    if (refine_iters < 0) throw std::invalid_argument("--refine-iters must be >= 0");
    return ReportOptions{zero_tol, psd_tol, DiscordOptions{grid_n, refine_iters}};
  }
};

inline void add_state_flags(CLI::App* cmd, StateFlags& f) {
  cmd->add_option("--state", f.state,
                  "rho_a|rho_b|rho_c|rho1|rho2|rho3|rho4|werner|gwerner|bell|file")
      ->required();
  cmd->add_option("--p", f.params.p, "classical mixing parameter");
  cmd->add_option("--q", f.params.q, "mixing parameter of rho_c");
  cmd->add_option("--n", f.params.n, "local superposition parameter");
  cmd->add_option("--k", f.params.k, "nonlocal superposition parameter");
  cmd->add_option("--path", f.path, "matrix file for --state file");
}

inline void add_knobs(CLI::App* cmd, Knobs& k) {
  cmd->add_option("--zero-tol", k.zero_tol, "discord counts as zero below this");
  cmd->add_option("--psd-tol", k.psd_tol, "eigenvalues below -tol are rejected");
  cmd->add_option("--grid", k.grid_n, "discord scan grid size per angle");
  cmd->add_option("--refine-iters", k.refine_iters, "simplex refinement iteration cap");
}

inline DensityMatrix<4> resolve_state(const StateFlags& f, double psd_tol) {
  reject_extra_params(f.state, f.params);
  std::optional<DensityMatrix<4>> file_state;
  if (state_family(f.state).from_file) {
    if (f.path.empty()) throw std::invalid_argument("--state file requires --path");
    file_state = load_state_file(f.path, psd_tol);
  } else if (!f.path.empty()) {
    throw std::invalid_argument("--path is only valid with --state file");
  }
  return make_named_state(f.state, f.params, file_state);
}

inline void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
  out << text;
}

inline AxisSpec parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("axis '" + spec + "' must look like name=start:stop:step");
  }
  AxisSpec axis;
  axis.name = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw std::invalid_argument("axis '" + spec + "' must look like name=start:stop:step");
  }
  try {
    std::size_t used = 0;
    axis.start = std::stod(rest.substr(0, c1), &used);
    axis.stop = std::stod(rest.substr(c1 + 1, c2 - c1 - 1), &used);
    axis.step = std::stod(rest.substr(c2 + 1), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("axis '" + spec + "' has a malformed number");
  }
  return axis;
}

inline int cmd_measure(const StateFlags& flags, const Knobs& knobs, const std::string& format,
                       const std::string& out_path) {
  const ReportOptions opts = knobs.report_options();
  const DensityMatrix<4> rho = resolve_state(flags, opts.psd_tol);
  const MeasureReport report = build_report(flags.state, flags.params, rho, opts);

  std::string text;
  if (format == "csv") {
    text = csv_header_comment(opts) + '\n' + csv_column_header() + '\n' + to_csv_row(report) + '\n';
  } else {
    text = to_json(report).dump(2) + '\n';
  }
  write_output(out_path, text);
  if (report.partial) {
    std::cerr << "error: discord minimization failed; report is partial\n";
    return 3;
  }
  return 0;
}

inline int cmd_classify(const StateFlags& flags, const Knobs& knobs, const std::string& format) {
  const ReportOptions opts = knobs.report_options();
  const DensityMatrix<4> rho = resolve_state(flags, opts.psd_tol);
  const ClassificationResult res = classify(rho, opts.zero_tol, opts.discord, opts.psd_tol);
  if (format == "json") {
    ordered_json j{{"label", std::string(to_string(res.label))},
                   {"entangled", res.entangled},
                   {"discord_A", res.delta.d_yx},
                   {"discord_B", res.delta.d_xy}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "label=" << to_string(res.label) << " entangled=" << (res.entangled ? "true" : "false")
              << " discord_A=" << format_number(res.delta.d_yx)
              << " discord_B=" << format_number(res.delta.d_xy) << '\n';
  }
  return 0;
}

inline int cmd_sweep(const StateFlags& flags, const Knobs& knobs,
                     const std::vector<std::string>& axis_specs,
                     const std::vector<std::string>& measures, const std::string& format,
                     const std::string& out_path) {
  SweepConfig cfg;
  cfg.state = flags.state;
  cfg.fixed = flags.params;
  cfg.measures = measures;
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  cfg.options = knobs.report_options();
  for (const std::string& s : axis_specs) cfg.axes.push_back(parse_axis(s));
  if (state_family(flags.state).from_file) {
    if (flags.path.empty()) throw std::invalid_argument("--state file requires --path");
    cfg.file_state = load_state_file(flags.path, cfg.options.psd_tol);
  } else if (!flags.path.empty()) {
    throw std::invalid_argument("--path is only valid with --state file");
  }

  std::ostringstream os;
  run_sweep(cfg, os);
  write_output(out_path, os.str());
  return 0;
}

inline int cmd_verify_decomposition(double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("--p must be >= 0");
  if (p > 1.0 / 3.0 + 1e-12) {
    throw std::invalid_argument(
        "the product-state decomposition is a valid density operator only for p <= 1/3");
  }
  const std::vector<MixtureComponent> parts = werner_separable_decomposition(p);
  const DensityMatrix<4> assembled = mix(parts);
  const double err = assembled.matrix().max_abs_diff(werner(p).matrix());
  const bool pass = err < 1e-12;
  std::cout << "p=" << format_number(p) << " components=" << parts.size()
            << " max_abs_error=" << format_number(err) << ' ' << (pass ? "PASS" : "FAIL") << '\n';
  if (!pass) {
    throw numeric_error("decomposition mismatch above 1e-12", err);
  }
  return 0;
}

inline int cmd_threshold(double k_start, std::optional<double> k_stop,
                         std::optional<double> k_step) {
  if (!(k_start >= 0.0)) throw std::invalid_argument("--k-start must be >= 0");
  const double stop = k_stop.value_or(k_start);
  const double step = k_step.value_or(0.1);
  if (!(step > 0.0)) throw std::invalid_argument("--k-step must be > 0");
  if (!(stop >= k_start)) throw std::invalid_argument("--k-stop must be >= --k-start");

  const AxisSpec axis{"k", k_start, stop, step};
  std::cout << "k,p_formula,p_bisection\n";
  double worst_gap = 0.0;
  for (double k : axis_values(axis)) {
    const double formula = gw_threshold(k);
    auto entangled_at = [k](double p) {
      return concurrence(generalized_werner(p, cplx{0.0, 0.0}, k)) > 0.0;
    };
    std::string bis_cell;
    if (!entangled_at(1.0)) {
      bis_cell = "no sign change in [0, 1]";
    } else {
      if (entangled_at(0.0)) throw numeric_error("threshold: no bracket at p = 0");
      double lo = 0.0, hi = 1.0;
      while (hi - lo > 1e-6) {
        const double mid = (lo + hi) / 2.0;
        (entangled_at(mid) ? hi : lo) = mid;
      }
      const double boundary = (lo + hi) / 2.0;
      bis_cell = format_number(boundary);
      worst_gap = std::max(worst_gap, std::abs(boundary - formula));
    }
    std::cout << format_number(k) << ',' << format_number(formula) << ',' << bis_cell << '\n';
  }
  if (worst_gap > 1e-5) {
    throw numeric_error("threshold: bisection and formula disagree beyond 1e-5", worst_gap);
  }
  return 0;
}

}  // namespace detail

/// Parses and runs one CLI invocation. Returns the process exit code.
inline int run(int argc, const char* const* argv) {
  CLI::App app{"two-qubit quantum correlation toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  detail::StateFlags measure_flags, classify_flags, sweep_flags;
  detail::Knobs measure_knobs, classify_knobs, sweep_knobs;
  std::string measure_format = "json", classify_format = "text", sweep_format = "csv";
  std::string measure_out, sweep_out;
  std::vector<std::string> axis_specs, measures;
  double verify_p = 0.0;
  double k_start = 0.0;
  std::optional<double> k_stop, k_step;

  CLI::App* measure = app.add_subcommand("measure", "compute all measures for one state");
  detail::add_state_flags(measure, measure_flags);
  detail::add_knobs(measure, measure_knobs);
  measure->add_option("--format", measure_format)->check(CLI::IsMember({"csv", "json"}));
  measure->add_option("--out", measure_out, "write to file instead of stdout");

  CLI::App* classify_cmd = app.add_subcommand("classify", "label one state");
  detail::add_state_flags(classify_cmd, classify_flags);
  detail::add_knobs(classify_cmd, classify_knobs);
  classify_cmd->add_option("--format", classify_format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* sweep = app.add_subcommand("sweep", "tabulate measures over parameter grids");
  detail::add_state_flags(sweep, sweep_flags);
  detail::add_knobs(sweep, sweep_knobs);
  sweep->add_option("--axis", axis_specs, "swept axis, name=start:stop:step (max 2)")
      ->required()
      ->expected(1, 2);
  sweep->add_option("--measures", measures,
                    "dA|dB|discord_function_A|discord_function_B|concurrence|negativity|"
                    "classification")
      ->required()
      ->delimiter(',');
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_out, "write to file instead of stdout");

  CLI::App* verify = app.add_subcommand("verify-decomposition",
                                        "check the product-state form of the Werner state");
  verify->add_option("--p", verify_p, "mixing parameter, p <= 1/3")->required();

  CLI::App* threshold = app.add_subcommand("threshold",
                                           "entanglement boundary of the generalized Werner state");
  threshold->add_option("--k-start", k_start)->required();
  threshold->add_option("--k-stop", k_stop);
  threshold->add_option("--k-step", k_step);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(measure)) {
      return detail::cmd_measure(measure_flags, measure_knobs, measure_format, measure_out);
    }
    if (app.got_subcommand(classify_cmd)) {
      return detail::cmd_classify(classify_flags, classify_knobs, classify_format);
    }
    if (app.got_subcommand(sweep)) {
      return detail::cmd_sweep(sweep_flags, sweep_knobs, axis_specs, measures, sweep_format,
                               sweep_out);
    }
    if (app.got_subcommand(verify)) {
      return detail::cmd_verify_decomposition(verify_p);
    }
    return detail::cmd_threshold(k_start, k_stop, k_step);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace qcorr::cli
