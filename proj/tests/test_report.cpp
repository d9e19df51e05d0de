#include <catch2/catch_amalgamated.hpp>

#include "qcorr/format.hpp"
#include "qcorr/report.hpp"
#include "qcorr/sweep.hpp"

using namespace qcorr;

TEST_CASE("csv number formatting") {
  SECTION("zeros and signs") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(-0.5) == "-0.500000000");
  }

  SECTION("nine significant digits in the plain range") {
    CHECK(format_number(0.2) == "0.200000000");
    CHECK(format_number(1.0) == "1.00000000");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(123456.789) == "123456.789");
    CHECK(format_number(0.0001) == "0.000100000000");
    CHECK(format_number(9999999.0) == "9999999.00");
  }

  SECTION("scientific notation outside [1e-4, 1e7)") {
    CHECK(format_number(1e-5) == "1.00000000e-05");
    CHECK(format_number(1e7) == "1.00000000e+07");
    CHECK(format_number(-3.25e-9) == "-3.25000000e-09");
  }
}

TEST_CASE("csv column order follows the documented contract") {
  CHECK(csv_column_header() ==
        "state,p,q,n,k,theta,phi,entropy_joint,entropy_A,entropy_B,discord_A,discord_B,"
        "discord_fn_A,discord_fn_B,concurrence,negativity,entangled,label");
}

TEST_CASE("measure report") {
  StateParams params;
  params.p = 0.9;
  const MeasureReport r = build_report("werner", params, werner(0.9));

  SECTION("label rule consistency") {
    CHECK(r.entangled);
    CHECK(r.label == Label::Entangled);
    CHECK_FALSE(r.partial);
  }

  SECTION("csv row fills only the known parameters") {
    const std::string row = to_csv_row(r);
    CHECK(row.substr(0, 7) == "werner,");
    // q, n, k unused -> three consecutive empty cells after p
    CHECK(row.find("werner,0.900000000,,,,,,") == 0);
  }

  SECTION("json carries the same fields plus optimizer metadata") {
    const ordered_json j = to_json(r);
    for (const auto& key : kCsvColumns) CHECK(j.contains(std::string(key)));
    CHECK(j["q"].is_null());
    CHECK(j["entangled"].get<bool>());
    CHECK(j["label"].get<std::string>() == "Entangled");
    CHECK(j["optimizer"].contains("measured_A"));
    CHECK(j["optimizer"]["measured_B"].contains("theta"));
  }
}

TEST_CASE("report of a classical state") {
  StateParams params;
  params.p = 0.5;
  const MeasureReport r = build_report("rho1", params, rho_1234(1, 0.5));
  CHECK(r.label == Label::ClassicalOrProduct);
  CHECK(r.delta.d_xy < 1e-6);
  CHECK(r.delta.d_yx < 1e-6);
  CHECK(r.entropy_joint == Catch::Approx(1.0).margin(1e-12));
  CHECK(r.entropy_A == Catch::Approx(1.0).margin(1e-12));
  CHECK(r.entropy_B == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("sweep validation") {
  SweepConfig cfg;
  cfg.state = "werner";
  cfg.axes = {{"p", 0.0, 1.0, 0.1}};
  cfg.measures = {"dB"};
  CHECK_NOTHROW(validate_sweep(cfg));

  SECTION("rejects a q axis") {
    cfg.state = "rho_c";
    cfg.axes = {{"q", 0.0, 1.0, 0.1}};
    CHECK_THROWS_AS(validate_sweep(cfg), std::invalid_argument);
  }

  SECTION("rejects covariance, which has no CSV column") {
    cfg.measures = {"covariance"};
    CHECK_THROWS_AS(validate_sweep(cfg), std::invalid_argument);
  }

  SECTION("rejects axes the state does not have") {
    cfg.axes = {{"n", 0.0, 1.0, 0.1}};
    CHECK_THROWS_AS(validate_sweep(cfg), std::invalid_argument);
  }

  SECTION("rejects a parameter both fixed and swept") {
    cfg.fixed.p = 0.5;
    CHECK_THROWS_AS(validate_sweep(cfg), std::invalid_argument);
  }

  SECTION("rejects discord_function without an angle axis") {
    cfg.fixed.p = {};
    cfg.axes = {{"p", 0.0, 1.0, 0.1}};
    cfg.measures = {"discord_function_B"};
    CHECK_THROWS_AS(validate_sweep(cfg), std::invalid_argument);
  }

  SECTION("rejects bad steps and empty measures") {
    cfg.axes = {{"p", 0.0, 1.0, -0.1}};
    cfg.measures = {"dB"};
    CHECK_THROWS_AS(validate_sweep(cfg), std::invalid_argument);
    cfg.axes = {{"p", 0.8, 0.2, 0.1}};
    CHECK_THROWS_AS(validate_sweep(cfg), std::invalid_argument);
    cfg.axes = {{"p", 0.0, 1.0, 0.1}};
    cfg.measures = {};
    CHECK_THROWS_AS(validate_sweep(cfg), std::invalid_argument);
  }
}

TEST_CASE("axis value generation") {
  CHECK(axis_values({"p", 0.0, 1.0, 0.25}).size() == 5);
  CHECK(axis_values({"p", 0.0, 1.0, 0.01}).size() == 101);
  CHECK(axis_values({"p", 0.5, 0.5, 0.1}).size() == 1);
  const auto vals = axis_values({"p", 0.0, 1.0, 0.25});
  CHECK(vals.back() == Catch::Approx(1.0));
}
