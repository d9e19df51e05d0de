#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qcorr/format.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"
#include "qcorr/version.hpp"

namespace qcorr {

using ordered_json = nlohmann::ordered_json;

/// Fixed CSV column order shared by `measure` and `sweep` output.
inline constexpr std::array<std::string_view, 18> kCsvColumns = {
    "state",        "p",          "q",          "n",
    "k",            "theta",      "phi",        "entropy_joint",
    "entropy_A",    "entropy_B",  "discord_A",  "discord_B",
    "discord_fn_A", "discord_fn_B", "concurrence", "negativity",
    "entangled",    "label"};

/// Optional construction parameters of the named state families.
struct StateParams {
  std::optional<double> p, q, n, k;
};

struct ReportOptions {
  double zero_tol = kDiscordZeroTol;
  double psd_tol = kPsdTol;
  DiscordOptions discord;
};

struct OptimizerSide {
  double theta = 0.0;
  double phi = 0.0;
  int iterations = 0;
};

/// Everything the CLI reports for a single state.
struct MeasureReport {
  std::string state;
  StateParams params;
  double entropy_joint = 0.0;
  double entropy_A = 0.0;
  double entropy_B = 0.0;
  DiscordVector delta;
  OptimizerSide opt_A;  // measurement on A (delta.d_yx)
  OptimizerSide opt_B;  // measurement on B (delta.d_xy)
  double concurrence = 0.0;
  double negativity = 0.0;
  bool entangled = false;
  Label label = Label::ClassicalOrProduct;
  bool partial = false;  // discord minimization failed; discord/label unset
};

inline MeasureReport build_report(const std::string& state_name, const StateParams& params,
                                  const DensityMatrix<4>& rho,
                                  const ReportOptions& opts = {}) {
  MeasureReport r;
  r.state = state_name;
  r.params = params;
  r.entropy_joint = entropy(rho);
  r.entropy_A = entropy(marginal(rho, Subsystem::A));
  r.entropy_B = entropy(marginal(rho, Subsystem::B));
  r.concurrence = qcorr::concurrence(rho);
  r.negativity = qcorr::negativity(rho);
  r.entangled = is_entangled(rho, opts.psd_tol);
  try {
    const DiscordResult a = minimize_discord(rho, Subsystem::A, opts.discord);
    const DiscordResult b = minimize_discord(rho, Subsystem::B, opts.discord);
    r.delta = DiscordVector{b.value, a.value};
    r.opt_A = {a.theta, a.phi, a.iterations};
    r.opt_B = {b.theta, b.phi, b.iterations};
    if (r.entangled) {
      r.label = Label::Entangled;
    } else if (r.delta.max_component() > opts.zero_tol) {
      r.label = Label::LocalQuantumnessOnly;
    } else {
      r.label = Label::ClassicalOrProduct;
    }
  } catch (const numeric_error&) {
    r.partial = true;
    r.delta = DiscordVector{std::nan(""), std::nan("")};
  }
  return r;
}

/// First line of every CSV file: records the settings that shape values.
inline std::string csv_header_comment(const ReportOptions& opts) {
  std::ostringstream os;
  os << "# qcorr v" << kVersion << " grid=" << opts.discord.grid_n
     << " refine-iters=" << opts.discord.refine_iters << " zero-tol=" << opts.zero_tol
     << " psd-tol=" << opts.psd_tol << " default-phi=0";
  return os.str();
}

inline std::string csv_column_header() {
  std::string line;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) line += ',';
    line += kCsvColumns[i];
  }
  return line;
}

namespace detail {

inline std::string opt_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace detail

inline std::string to_csv_row(const MeasureReport& r) {
  std::array<std::string, 18> cells;
  cells[0] = r.state;
  cells[1] = detail::opt_cell(r.params.p);
  cells[2] = detail::opt_cell(r.params.q);
  cells[3] = detail::opt_cell(r.params.n);
  cells[4] = detail::opt_cell(r.params.k);
  // theta/phi describe a fixed measurement basis; a full report minimizes
  // over bases instead, so those cells stay empty
  cells[7] = format_number(r.entropy_joint);
  cells[8] = format_number(r.entropy_A);
  cells[9] = format_number(r.entropy_B);
  if (!r.partial) {
    cells[10] = format_number(r.delta.d_yx);
    cells[11] = format_number(r.delta.d_xy);
  }
  cells[14] = format_number(r.concurrence);
  cells[15] = format_number(r.negativity);
  cells[16] = r.entangled ? "true" : "false";
  if (!r.partial) cells[17] = std::string(to_string(r.label));

  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

inline ordered_json to_json(const MeasureReport& r) {
  ordered_json j;
  j["state"] = r.state;
  j["p"] = r.params.p ? ordered_json(*r.params.p) : ordered_json(nullptr);
  j["q"] = r.params.q ? ordered_json(*r.params.q) : ordered_json(nullptr);
  j["n"] = r.params.n ? ordered_json(*r.params.n) : ordered_json(nullptr);
  j["k"] = r.params.k ? ordered_json(*r.params.k) : ordered_json(nullptr);
  j["theta"] = nullptr;
  j["phi"] = nullptr;
  j["entropy_joint"] = r.entropy_joint;
  j["entropy_A"] = r.entropy_A;
  j["entropy_B"] = r.entropy_B;
  if (r.partial) {
    j["discord_A"] = nullptr;
    j["discord_B"] = nullptr;
  } else {
    j["discord_A"] = r.delta.d_yx;
    j["discord_B"] = r.delta.d_xy;
  }
  j["discord_fn_A"] = nullptr;
  j["discord_fn_B"] = nullptr;
  j["concurrence"] = r.concurrence;
  j["negativity"] = r.negativity;
  j["entangled"] = r.entangled;
  j["label"] = r.partial ? ordered_json(nullptr) : ordered_json(std::string(to_string(r.label)));
  if (!r.partial) {
    j["optimizer"] = ordered_json{
        {"measured_A",
         {{"theta", r.opt_A.theta}, {"phi", r.opt_A.phi}, {"iterations", r.opt_A.iterations}}},
        {"measured_B",
         {{"theta", r.opt_B.theta}, {"phi", r.opt_B.phi}, {"iterations", r.opt_B.iterations}}}};
  }
  j["partial"] = r.partial;
  return j;
}

}  // namespace qcorr
