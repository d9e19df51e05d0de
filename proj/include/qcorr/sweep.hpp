#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qcorr/measures.hpp"
#include "qcorr/report.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Which construction parameters a named state family takes.
struct StateFamily {
  bool needs_p = false;
  bool needs_q = false;
  bool needs_n = false;
  bool needs_k = false;
  bool from_file = false;
};

inline StateFamily state_family(const std::string& name) {
  if (name == "rho_a" || name == "bell") return {};
  if (name == "rho_b" || name == "rho1" || name == "rho2" || name == "rho3" ||
      name == "rho4" || name == "werner") {
    return {.needs_p = true};
  }
  if (name == "rho_c") return {.needs_q = true};
  if (name == "gwerner") return {.needs_p = true, .needs_n = true, .needs_k = true};
  if (name == "file") return {.from_file = true};
  throw std::invalid_argument("unknown state '" + name +
                              "' (expected rho_a|rho_b|rho_c|rho1|rho2|rho3|rho4|"
                              "werner|gwerner|bell|file)");
}

inline DensityMatrix<4> make_named_state(const std::string& name, const StateParams& params,
                                         const std::optional<DensityMatrix<4>>& file_state = {}) {
  const StateFamily fam = state_family(name);
  auto need = [&name](const std::optional<double>& v, const char* flag) -> double {
    if (!v) {
      throw std::invalid_argument("state '" + name + "' requires parameter " + flag);
    }
    return *v;
  };
  if (fam.from_file) {
    if (!file_state) throw std::invalid_argument("state 'file' requires a loaded matrix");
    return *file_state;
  }
  if (name == "rho_a") return rho_abc('a');
  if (name == "rho_b") return rho_abc('b', need(params.p, "p"));
  if (name == "rho_c") return rho_abc('c', need(params.q, "q"));
  if (name == "rho1") return rho_1234(1, need(params.p, "p"));
  if (name == "rho2") return rho_1234(2, need(params.p, "p"));
  if (name == "rho3") return rho_1234(3, need(params.p, "p"));
  if (name == "rho4") return rho_1234(4, need(params.p, "p"));
  if (name == "werner") return werner(need(params.p, "p"));
  if (name == "gwerner") {
    return generalized_werner(need(params.p, "p"), cplx{need(params.n, "n"), 0.0},
                              need(params.k, "k"));
  }
  return DensityMatrix<4>::pure(bell_phi_plus());  // bell
}

enum class OutputFormat { Csv, Json };

/// One swept axis: values start, start+step, ..., up to stop inclusive.
struct AxisSpec {
  std::string name;  // p | n | k | theta | phi
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
};

struct SweepConfig {
  std::string state;
  StateParams fixed;
  std::vector<AxisSpec> axes;          // 1 or 2
  std::vector<std::string> measures;   // see kSweepMeasures
  OutputFormat format = OutputFormat::Csv;
  ReportOptions options;
  std::optional<DensityMatrix<4>> file_state;
};

inline constexpr std::array<std::string_view, 7> kSweepMeasures = {
    "dA", "dB", "discord_function_A", "discord_function_B",
    "concurrence", "negativity", "classification"};

inline std::vector<double> axis_values(const AxisSpec& a) {
  const double span = (a.stop - a.start) / a.step;
  const long long count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
  if (count > 10'000'000) throw std::invalid_argument("axis '" + a.name + "' has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    // roundoff may push the last point just past stop; keep it in range
    out.push_back(std::min(a.start + static_cast<double>(i) * a.step, a.stop));
  }
  return out;
}

inline void validate_sweep(const SweepConfig& cfg) {
  const StateFamily fam = state_family(cfg.state);
  if (fam.from_file && !cfg.file_state) {
    throw std::invalid_argument("state 'file' requires a loaded matrix");
  }

  if (cfg.axes.empty() || cfg.axes.size() > 2) {
    throw std::invalid_argument("sweep takes one or two axes");
  }
  bool has_theta_or_phi = false;
  for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
    const AxisSpec& a = cfg.axes[i];
    if (a.name != "p" && a.name != "n" && a.name != "k" && a.name != "theta" &&
        a.name != "phi") {
      throw std::invalid_argument("axis '" + a.name + "' is not sweepable (use p, n, k, theta or phi)");
    }
    if (!(a.step > 0.0)) throw std::invalid_argument("axis '" + a.name + "' needs step > 0");
    if (!(a.start <= a.stop)) {
      throw std::invalid_argument("axis '" + a.name + "' needs start <= stop");
    }
    for (std::size_t j = i + 1; j < cfg.axes.size(); ++j) {
      if (cfg.axes[j].name == a.name) {
        throw std::invalid_argument("axis '" + a.name + "' given twice");
      }
    }
    if (a.name == "theta" || a.name == "phi") {
      has_theta_or_phi = true;
      continue;
    }
    const bool applicable = (a.name == "p" && fam.needs_p) || (a.name == "n" && fam.needs_n) ||
                            (a.name == "k" && fam.needs_k);
    if (!applicable) {
      throw std::invalid_argument("state '" + cfg.state + "' has no parameter '" + a.name + "'");
    }
    if (a.name == "p" && !(a.start >= 0.0 && a.stop <= 1.0)) {
      throw std::invalid_argument("axis 'p' must stay within [0, 1]");
    }
    if (a.name == "k" && !(a.start >= 0.0)) {
      throw std::invalid_argument("axis 'k' must stay within k >= 0");
    }
    const bool also_fixed = (a.name == "p" && cfg.fixed.p) || (a.name == "n" && cfg.fixed.n) ||
                            (a.name == "k" && cfg.fixed.k);
    if (also_fixed) {
      throw std::invalid_argument("parameter '" + a.name + "' is both fixed and swept");
    }
  }

  auto has_axis = [&cfg](const char* name) {
    return std::any_of(cfg.axes.begin(), cfg.axes.end(),
                       [name](const AxisSpec& a) { return a.name == name; });
  };
  auto check_param = [&](bool needed, const std::optional<double>& fixed, const char* name,
                         bool sweepable) {
    if (needed) {
      if (!fixed && !(sweepable && has_axis(name))) {
        throw std::invalid_argument("state '" + cfg.state + "' requires parameter " + name +
                                    " (fix it or sweep it)");
      }
    } else if (fixed) {
      throw std::invalid_argument("state '" + cfg.state + "' takes no parameter " + name);
    }
  };
  check_param(fam.needs_p, cfg.fixed.p, "p", true);
  check_param(fam.needs_q, cfg.fixed.q, "q", false);
  check_param(fam.needs_n, cfg.fixed.n, "n", true);
  check_param(fam.needs_k, cfg.fixed.k, "k", true);

  if (cfg.measures.empty()) throw std::invalid_argument("no measures selected");
  bool wants_discord_fn = false;
  for (const std::string& m : cfg.measures) {
    if (m == "covariance") {
      throw std::invalid_argument(
          "covariance has no CSV column; it is available through the library API only");
    }
    if (std::find(kSweepMeasures.begin(), kSweepMeasures.end(), m) == kSweepMeasures.end()) {
      throw std::invalid_argument("unknown measure '" + m + "'");
    }
    if (m == "discord_function_A" || m == "discord_function_B") wants_discord_fn = true;
  }
  if (wants_discord_fn && !has_theta_or_phi) {
    throw std::invalid_argument(
        "discord_function measures need a theta or phi axis (unswept angle defaults to 0)");
  }
}

namespace detail {

struct SweepRow {
  std::array<std::string, 18> cells;
  ordered_json json;
};

}  // namespace detail

/// Runs the sweep and writes CSV or JSON to `out`. Rows are ordered
/// lexicographically by the swept-axis values; output is byte-identical
/// across runs for identical configuration.
inline void run_sweep(const SweepConfig& cfg, std::ostream& out) {
  validate_sweep(cfg);

  auto selected = [&cfg](std::string_view name) {
    return std::find(cfg.measures.begin(), cfg.measures.end(), name) != cfg.measures.end();
  };
  const bool want_dA = selected("dA");
  const bool want_dB = selected("dB");
  const bool want_fnA = selected("discord_function_A");
  const bool want_fnB = selected("discord_function_B");
  const bool want_conc = selected("concurrence");
  const bool want_neg = selected("negativity");
  const bool want_class = selected("classification");
  const bool want_angles = want_fnA || want_fnB;

  const std::vector<double> outer = axis_values(cfg.axes[0]);
  const std::vector<double> inner =
      cfg.axes.size() > 1 ? axis_values(cfg.axes[1]) : std::vector<double>{0.0};

  ordered_json json_rows = ordered_json::array();
  if (cfg.format == OutputFormat::Csv) {
    out << csv_header_comment(cfg.options) << '\n' << csv_column_header() << '\n';
  }

  for (double v0 : outer) {
    for (std::size_t i1 = 0; i1 < inner.size(); ++i1) {
      StateParams eff = cfg.fixed;
      double theta = 0.0, phi = 0.0;
      bool theta_swept = false, phi_swept = false;
      auto apply = [&](const std::string& name, double v) {
        if (name == "p") eff.p = v;
        else if (name == "n") eff.n = v;
        else if (name == "k") eff.k = v;
        else if (name == "theta") { theta = v; theta_swept = true; }
        else { phi = v; phi_swept = true; }
      };
      apply(cfg.axes[0].name, v0);
      if (cfg.axes.size() > 1) apply(cfg.axes[1].name, inner[i1]);

      const DensityMatrix<4> rho = make_named_state(cfg.state, eff, cfg.file_state);

      std::optional<double> dA, dB, fnA, fnB, conc, neg;
      std::optional<bool> ent;
      std::optional<Label> label;
      if (want_dA || (want_class)) dA = discord(rho, Subsystem::A, cfg.options.discord);
      if (want_dB || (want_class)) dB = discord(rho, Subsystem::B, cfg.options.discord);
      if (want_fnA) fnA = discord_function(rho, Subsystem::A, {theta, phi});
      if (want_fnB) fnB = discord_function(rho, Subsystem::B, {theta, phi});
      if (want_conc) conc = concurrence(rho);
      if (want_neg) neg = negativity(rho);
      if (want_class) {
        ent = is_entangled(rho, cfg.options.psd_tol);
        label = *ent ? Label::Entangled
                     : (std::max(*dA, *dB) > cfg.options.zero_tol
                            ? Label::LocalQuantumnessOnly
                            : Label::ClassicalOrProduct);
      }

      if (cfg.format == OutputFormat::Csv) {
        std::array<std::string, 18> c;
        c[0] = cfg.state;
        c[1] = detail::opt_cell(eff.p);
        c[2] = detail::opt_cell(eff.q);
        c[3] = detail::opt_cell(eff.n);
        c[4] = detail::opt_cell(eff.k);
        if (theta_swept || want_angles) c[5] = format_number(theta);
        if (phi_swept || want_angles) c[6] = format_number(phi);
        if (want_dA) c[10] = format_number(*dA);
        if (want_dB) c[11] = format_number(*dB);
        if (want_fnA) c[12] = format_number(*fnA);
        if (want_fnB) c[13] = format_number(*fnB);
        if (want_conc) c[14] = format_number(*conc);
        if (want_neg) c[15] = format_number(*neg);
        if (want_class) {
          c[16] = *ent ? "true" : "false";
          c[17] = std::string(to_string(*label));
        }
        std::string line;
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (i) line += ',';
          line += c[i];
        }
        out << line << '\n';
      } else {
        ordered_json j;
        auto put = [&j](std::string_view key, const auto& opt) {
          if (opt) j[std::string(key)] = *opt;
          else j[std::string(key)] = nullptr;
        };
        j["state"] = cfg.state;
        put("p", eff.p);
        put("q", eff.q);
        put("n", eff.n);
        put("k", eff.k);
        j["theta"] = (theta_swept || want_angles) ? ordered_json(theta) : ordered_json(nullptr);
        j["phi"] = (phi_swept || want_angles) ? ordered_json(phi) : ordered_json(nullptr);
        j["entropy_joint"] = nullptr;
        j["entropy_A"] = nullptr;
        j["entropy_B"] = nullptr;
        put("discord_A", want_dA ? dA : std::optional<double>{});
        put("discord_B", want_dB ? dB : std::optional<double>{});
        put("discord_fn_A", fnA);
        put("discord_fn_B", fnB);
        put("concurrence", conc);
        put("negativity", neg);
        j["entangled"] = ent ? ordered_json(*ent) : ordered_json(nullptr);
        j["label"] = label ? ordered_json(std::string(to_string(*label))) : ordered_json(nullptr);
        json_rows.push_back(std::move(j));
      }
    }
  }

  if (cfg.format == OutputFormat::Json) out << json_rows.dump(2) << '\n';
}

}  // namespace qcorr
