#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcorr/cli.hpp"
#include "support/subprocess.hpp"

using nlohmann::json;
using testsupport::run_cli;

namespace {

const std::string kBinary = QCORR_CLI_PATH;
const std::filesystem::path kGoldenDir = QCORR_GOLDEN_DIR;

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    // a trailing empty cell is dropped by getline; restore it
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (table.columns.empty()) {
      table.columns = cells;
    } else {
      table.rows.push_back(cells);
    }
  }
  return table;
}

std::size_t column_index(const CsvTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  FAIL("missing column " + name);
  return 0;
}

}  // namespace

TEST_CASE("measure reports entanglement of werner(0.9)") {
  const auto res = run_cli(kBinary, "measure --state werner --p 0.9");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j["entangled"].get<bool>());
  CHECK(j["label"].get<std::string>() == "Entangled");
  CHECK(j["concurrence"].get<double>() > 0.8);
}

TEST_CASE("measure labels rho1 as classical") {
  const auto res = run_cli(kBinary, "measure --state rho1 --p 0.5");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j["discord_A"].get<double>() < 1e-6);
  CHECK(j["discord_B"].get<double>() < 1e-6);
  CHECK(j["label"].get<std::string>() == "ClassicalOrProduct");
}

TEST_CASE("measure on the Bell state") {
  const auto res = run_cli(kBinary, "measure --state bell");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(std::abs(j["discord_A"].get<double>() - 1.0) < 1e-6);
  CHECK(std::abs(j["concurrence"].get<double>() - 1.0) < 1e-9);
}

TEST_CASE("measure csv output carries the settings header") {
  const auto res = run_cli(kBinary, "measure --state bell --format csv");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("# qcorr v", 0) == 0);
  const CsvTable t = parse_csv(res.out);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][column_index(t, "state")] == "bell");
  CHECK(t.rows[0][column_index(t, "p")].empty());
  CHECK(t.rows[0][column_index(t, "entangled")] == "true");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli(kBinary, "measure --state nosuch").exit_code == 2);
  CHECK(run_cli(kBinary, "measure --state werner").exit_code == 2);       // missing p
  CHECK(run_cli(kBinary, "measure --state werner --p 1.5").exit_code == 2);
  CHECK(run_cli(kBinary, "measure --state rho_c --p 0.5").exit_code == 2);  // q, not p
  CHECK(run_cli(kBinary, "measure --state bell --p 0.5").exit_code == 2);
  CHECK(run_cli(kBinary, "nosuchcommand").exit_code == 2);
  CHECK(run_cli(kBinary, "sweep --state werner --axis p=0:1:0.1").exit_code == 2);
  CHECK(run_cli(kBinary,
                "sweep --state werner --axis p=0:1:0.1 --measures covariance")
            .exit_code == 2);
  CHECK(run_cli(kBinary, "sweep --state rho_c --q 0.5 --axis q=0:1:0.1 --measures dB")
            .exit_code == 2);
  CHECK(run_cli(kBinary, "verify-decomposition --p 0.35").exit_code == 2);
  CHECK(run_cli(kBinary, "threshold --k-start -0.5").exit_code == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli(kBinary, "--help").exit_code == 0);
  CHECK(run_cli(kBinary, "measure --help").exit_code == 0);
}

TEST_CASE("exception mapping distinguishes numeric failures") {
  CHECK(qcorr::cli::exit_code_for(std::invalid_argument("x")) == 2);
  CHECK(qcorr::cli::exit_code_for(qcorr::not_positive_semidefinite("x")) == 2);
  CHECK(qcorr::cli::exit_code_for(qcorr::numeric_error("x", 0.1)) == 3);
}

TEST_CASE("optimizer knobs reach the output header and are validated") {
  const auto res = run_cli(kBinary,
                           "measure --state bell --format csv --grid 16 --refine-iters 100 "
                           "--zero-tol 1e-5");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("grid=16") != std::string::npos);
  CHECK(res.out.find("refine-iters=100") != std::string::npos);
  CHECK(res.out.find("zero-tol=1e-05") != std::string::npos);

  CHECK(run_cli(kBinary, "measure --state bell --grid 1").exit_code == 2);
  CHECK(run_cli(kBinary, "measure --state bell --refine-iters -2").exit_code == 2);
  CHECK(run_cli(kBinary, "measure --state bell --psd-tol 0").exit_code == 2);
}

TEST_CASE("classify subcommand") {
  const auto res = run_cli(kBinary, "classify --state werner --p 0.2");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("label=LocalQuantumnessOnly") != std::string::npos);
  CHECK(res.out.find("entangled=false") != std::string::npos);
}

TEST_CASE("werner sweep reproduces the separability split") {
  const auto res = run_cli(kBinary,
                           "sweep --state werner --axis p=0:1:0.01 --measures dB,concurrence");
  REQUIRE(res.exit_code == 0);
  const CsvTable t = parse_csv(res.out);
  REQUIRE(t.rows.size() == 101);
  const std::size_t ip = column_index(t, "p");
  const std::size_t ic = column_index(t, "concurrence");
  const std::size_t id = column_index(t, "discord_B");
  for (const auto& row : t.rows) {
    const double p = std::stod(row[ip]);
    const double c = std::stod(row[ic]);
    const double d = std::stod(row[id]);
    if (p <= 0.33) CHECK(c == 0.0);
    if (p >= 0.34) CHECK(c > 0.0);
    if (p >= 0.01) CHECK(d > 0.0);
  }
}

TEST_CASE("generalized werner sweep: concurrence is flat in n at fixed k") {
  const auto res = run_cli(kBinary,
                           "sweep --state gwerner --p 0.4 --axis k=0:1:0.25 "
                           "--axis n=0:2:0.5 --measures concurrence");
  REQUIRE(res.exit_code == 0);
  const CsvTable t = parse_csv(res.out);
  REQUIRE(t.rows.size() == 25);
  const std::size_t ik = column_index(t, "k");
  const std::size_t ic = column_index(t, "concurrence");
  // rows come lexicographically in (k, n); within one k block the
  // concurrence must not move with n
  for (std::size_t i = 0; i < t.rows.size(); i += 5) {
    const double first = std::stod(t.rows[i][ic]);
    for (std::size_t j = i; j < i + 5; ++j) {
      CHECK(t.rows[j][ik] == t.rows[i][ik]);
      CHECK(std::abs(std::stod(t.rows[j][ic]) - first) < 1e-9);
    }
  }
}

TEST_CASE("theta sweep of the rho1 discord function dips to zero") {
  const auto res = run_cli(kBinary,
                           "sweep --state rho1 --p 0.5 --axis theta=0:3.141592653589793:0.05 "
                           "--measures discord_function_B");
  REQUIRE(res.exit_code == 0);
  const CsvTable t = parse_csv(res.out);
  const std::size_t ifn = column_index(t, "discord_fn_B");
  double best = 1e9;
  for (const auto& row : t.rows) best = std::min(best, std::stod(row[ifn]));
  CHECK(best < 1e-9);
}

TEST_CASE("sweep output is deterministic and matches the golden fixture") {
  const std::string args =
      "sweep --state werner --axis p=0:1:0.05 --measures dB,concurrence,negativity,"
      "classification";
  const auto first = run_cli(kBinary, args);
  const auto second = run_cli(kBinary, args);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == second.out);

  const std::string golden = testsupport::slurp(kGoldenDir / "werner_p_sweep.csv");
  REQUIRE_FALSE(golden.empty());
  CHECK(first.out == golden);
}

TEST_CASE("every sweep row is classification-consistent") {
  const auto res = run_cli(kBinary,
                           "sweep --state werner --axis p=0:1:0.1 "
                           "--measures dA,dB,negativity,classification");
  REQUIRE(res.exit_code == 0);
  const CsvTable t = parse_csv(res.out);
  const std::size_t ia = column_index(t, "discord_A");
  const std::size_t ib = column_index(t, "discord_B");
  const std::size_t ie = column_index(t, "entangled");
  const std::size_t in = column_index(t, "negativity");
  const std::size_t il = column_index(t, "label");
  for (const auto& row : t.rows) {
    const bool entangled = row[ie] == "true";
    CHECK(entangled == (std::stod(row[in]) > 0.0));
    const double dmax = std::max(std::stod(row[ia]), std::stod(row[ib]));
    const std::string expected = entangled            ? "Entangled"
                                 : dmax > 1e-6        ? "LocalQuantumnessOnly"
                                                      : "ClassicalOrProduct";
    CHECK(row[il] == expected);
  }
}

TEST_CASE("sweep json format emits one object per row") {
  const auto res = run_cli(kBinary,
                           "sweep --state werner --axis p=0:1:0.5 --measures dB --format json");
  REQUIRE(res.exit_code == 0);
  const json rows = json::parse(res.out);
  REQUIRE(rows.is_array());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["state"] == "werner");
  CHECK(rows[0]["discord_B"].is_number());
  CHECK(rows[0]["concurrence"].is_null());
}

TEST_CASE("verify-decomposition") {
  const auto ok = run_cli(kBinary, "verify-decomposition --p 0.2");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("PASS") != std::string::npos);

  const auto boundary = run_cli(kBinary, "verify-decomposition --p 0.3333333333333333");
  CHECK(boundary.exit_code == 0);
  CHECK(boundary.out.find("PASS") != std::string::npos);
}

TEST_CASE("threshold table") {
  const auto res = run_cli(kBinary, "threshold --k-start 0 --k-stop 1 --k-step 0.5");
  REQUIRE(res.exit_code == 0);
  std::istringstream in(res.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,p_formula,p_bisection");
  std::getline(in, line);
  CHECK(line.find("no sign change in [0, 1]") != std::string::npos);
  std::getline(in, line);
  CHECK(line.rfind("0.500000000,0.384615385,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("1.00000000,0.333333333,", 0) == 0);
}

TEST_CASE("state loaded from file") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "qcorr_state_file.txt";
  {
    // werner(0.5), written as re/im pairs
    const qcorr::Mat4 m = qcorr::werner(0.5).matrix();
    std::ofstream out(path);
    out.precision(17);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out << m(i, j).real() << ' ' << m(i, j).imag() << '\n';
  }
  const auto res = run_cli(kBinary, "measure --state file --path " + path.string());
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(std::abs(j["negativity"].get<double>() - 0.125) < 1e-9);
  CHECK(j["entangled"].get<bool>());
  std::filesystem::remove(path);

  SECTION("missing and malformed files exit 2") {
    CHECK(run_cli(kBinary, "measure --state file --path /nonexistent").exit_code == 2);
    const auto bad = dir / "qcorr_bad_state.txt";
    std::ofstream(bad) << "1 0 0 0";  // wrong count
    CHECK(run_cli(kBinary, "measure --state file --path " + bad.string()).exit_code == 2);
    std::filesystem::remove(bad);
  }
}
