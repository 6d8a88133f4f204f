#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "maglat/errors.hpp"
#include "maglat/fitting.hpp"
#include "maglat/rng.hpp"
#include "oracle_utils.hpp"

using namespace maglat;

namespace {

std::vector<double> gaussian_y(const std::vector<double>& x, double a,
                               double b0, double g, double base = 0.0) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = a * std::exp(-g * (x[i] - b0) * (x[i] - b0)) + base;
  return y;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("noiseless recovery is exact for all three models") {
  const auto x = oracle::linspace(3.6, 4.9, 40);
  const FitResult g = fit_gaussian_peak(x, gaussian_y(x, 0.42, 4.24, 2.0));
  CHECK(g.converged);
  CHECK(g.param("amplitude") == doctest::Approx(0.42).epsilon(1e-8));
  CHECK(g.param("b0") == doctest::Approx(4.24).epsilon(1e-8));
  CHECK(g.param("gamma") == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(g.r_squared == doctest::Approx(1.0).epsilon(1e-10));

  const auto t = oracle::linspace(0.05, 1.0, 20);
  std::vector<double> ey(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    ey[i] = 0.034 * std::exp(-t[i] / 0.32);
  const FitResult e = fit_exponential(t, ey);
  CHECK(e.param("eta0") == doctest::Approx(0.034).epsilon(1e-8));
  CHECK(e.param("tau") == doctest::Approx(0.32).epsilon(1e-8));

  std::vector<double> ly(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) ly[i] = 1.1e-3 * t[i];
  const FitResult l = fit_linear_origin(t, ly);
  CHECK(l.param("slope") == doctest::Approx(1.1e-3).epsilon(1e-12));
  CHECK(l.sigma("slope") == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gaussian with baseline and the width identity gamma = 1/w^2") {
  const auto x = oracle::linspace(3.0, 5.5, 60);
  const double w = 0.707;
  const FitResult g =
      fit_gaussian_peak(x, gaussian_y(x, 0.3, 4.2, 1.0 / (w * w), 0.005), true);
  CHECK(g.param("baseline") == doctest::Approx(0.005).epsilon(1e-7));
  CHECK(g.param("gamma") == doctest::Approx(1.0 / (w * w)).epsilon(1e-8));
}

TEST_CASE("fits tolerate 30 percent initializer perturbations") {
  const auto x = oracle::linspace(3.64, 4.84, 60);
  const auto y = gaussian_y(x, 0.42, 4.24, 2.0);
  const double width = 1.0 / std::sqrt(2.0);
  for (double s : {-0.3, 0.3}) {
    const std::vector<double> init = {0.42 * (1.0 + s), 4.24 + s * width,
                                      2.0 * (1.0 - s)};
    const FitResult g = fit_gaussian_peak(x, y, false, &init);
    CHECK(g.param("b0") == doctest::Approx(4.24).epsilon(1e-6));
    CHECK(g.param("amplitude") == doctest::Approx(0.42).epsilon(1e-6));
  }
  const auto t = oracle::linspace(0.05, 1.0, 20);
  std::vector<double> ey(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    ey[i] = 0.034 * std::exp(-t[i] / 0.32);
  for (double s : {-0.3, 0.3}) {
    const std::vector<double> init = {0.034 * (1.0 + s), 0.32 * (1.0 - s)};
    const FitResult e = fit_exponential(t, ey, &init);
    CHECK(e.param("tau") == doctest::Approx(0.32).epsilon(1e-6));
  }
}

TEST_CASE("two-timescale decay is flagged as a poor single exponential") {
  const auto t = oracle::linspace(0.05, 1.0, 20);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    y[i] = 0.020 * std::exp(-t[i] / 0.06) + 0.014 * std::exp(-t[i] / 2.0);
  const FitResult e = fit_exponential(t, y);
  CHECK(e.r_squared < 0.95);
  bool flagged = false;
  for (const auto& w : e.warnings)
    flagged |= w.find("poor single-exponential") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("single-point origin line and degenerate input") {
  const FitResult l = fit_linear_origin({2.0}, {3.0});
  CHECK(l.param("slope") == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(l.sigma("slope") == 0.0);
  CHECK_THROWS_AS(fit_linear_origin({0.0, 0.0}, {1.0, 2.0}), InvariantError);
}

TEST_CASE("edge peaks and starved inputs are rejected") {
  const auto x = oracle::linspace(0.0, 1.0, 30);
  std::vector<double> rising(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) rising[i] = 0.1 + 0.5 * x[i];
  CHECK_THROWS_AS(fit_gaussian_peak(x, rising), NonConvergence);
  CHECK_THROWS_AS(fit_gaussian_peak({1, 2, 3, 4}, {1, 2, 1, 0.5}), InvariantError);
  CHECK_THROWS_AS(fit_exponential({1, 2, 3}, {1, 0.5, 0.25}), InvariantError);
  CHECK_THROWS_AS(
      fit_exponential({1, 2, 3, 4, 5}, {-1, -0.5, -0.25, -0.1, 0.1}),
      InvariantError);
}

TEST_CASE("csv ingestion: typed curves, schema errors, sorting") {
  const std::string decay_path = write_temp(
      "maglat_decay.csv", "t_s,efficiency,stderr\n0.1,0.03,0.001\n0.2,0.02,0.001\n"
                          "0.3,0.015,0.001\n0.4,0.011,0.001\n");
  const auto decay = ingest_csv(decay_path);
  REQUIRE(std::holds_alternative<DecayCurve>(decay));
  CHECK(std::get<DecayCurve>(decay).t_s.size() == 4);
  CHECK(std::get<DecayCurve>(decay).efficiency[1] == 0.02);

  const std::string scan_path = write_temp(
      "maglat_scan.csv", "B_G,efficiency\n4.0,0.01\n4.2,0.03\n4.4,0.012\n");
  REQUIRE(std::holds_alternative<ScanCurve>(ingest_csv(scan_path)));

  const std::string bad_head = write_temp(
      "maglat_bad_head.csv", "frequency,efficiency\n1,2\n");
  CHECK_THROWS_WITH_AS(ingest_csv(bad_head),
                       doctest::Contains("abscissa"), ConfigError);
  const std::string bad_cell = write_temp(
      "maglat_bad_cell.csv", "t_s,efficiency\n0.1,0.03\n0.2,oops\n");
  CHECK_THROWS_WITH_AS(ingest_csv(bad_cell),
                       doctest::Contains("non-numeric"), ConfigError);
  const std::string empty = write_temp("maglat_empty.csv", "");
  CHECK_THROWS_AS(ingest_csv(empty), ConfigError);

  const std::string unsorted = write_temp(
      "maglat_unsorted.csv",
      "t_s,efficiency\n0.3,0.015\n0.1,0.03\n0.2,0.02\n0.4,0.011\n");
  const auto sorted = ingest_csv(unsorted);
  const DecayCurve& c = std::get<DecayCurve>(sorted);
  CHECK(c.t_s == std::vector<double>{0.1, 0.2, 0.3, 0.4});
  bool warned = false;
  for (const auto& w : c.warnings)
    warned |= w.find("unsorted") != std::string::npos;
  CHECK(warned);
  // fit is invariant to the original row order
  const DecayCurve& ordered = std::get<DecayCurve>(decay);
  CHECK(fit_exponential(c.t_s, c.efficiency).param("tau") ==
        doctest::Approx(fit_exponential(ordered.t_s, ordered.efficiency)
                            .param("tau"))
            .epsilon(1e-12));
  for (const std::string& p : {decay_path, scan_path, bad_head, bad_cell,
                               empty, unsorted})
    std::remove(p.c_str());
}

// Frozen Monte Carlo coverage run: 200 noise trials per model with 5%
// multiplicative gaussian noise from the counter RNG (trial k of model with
// base b uses stream seed b + k).  The hit counts below were produced once
// by an independent reference implementation of the same protocol and are
// asserted exactly: 2-sigma recovery hits out of 200.
TEST_CASE("frozen noisy-recovery hit counts") {
  const int kTrials = 200;

  // gaussian peak, target b0
  {
    const auto x = oracle::linspace(4.24 - 0.6, 4.24 + 0.6, 60);
    const auto yt = gaussian_y(x, 0.42, 4.24, 2.0);
    int hits = 0;
    for (int k = 1; k <= kTrials; ++k) {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = yt[i] * (1.0 + 0.05 * rng::normal(10000 + k, i));
      const std::vector<double> init = {0.40, 4.20, 1.8};
      const FitResult fr = fit_gaussian_peak(x, y, false, &init);
      hits += std::abs(fr.param("b0") - 4.24) <= 2.0 * fr.sigma("b0") ? 1 : 0;
    }
    CHECK(hits == 195);
  }

  // exponential decay, target tau
  {
    const auto t = oracle::geomspace(0.01, 0.64, 60);
    std::vector<double> yt(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      yt[i] = 0.034 * std::exp(-t[i] / 0.32);
    int hits = 0;
    for (int k = 1; k <= kTrials; ++k) {
      std::vector<double> y(t.size());
      for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = yt[i] * (1.0 + 0.05 * rng::normal(20000 + k, i));
      const std::vector<double> init = {0.03, 0.28};
      const FitResult fr = fit_exponential(t, y, &init);
      hits += std::abs(fr.param("tau") - 0.32) <= 2.0 * fr.sigma("tau") ? 1 : 0;
    }
    CHECK(hits == 199);
  }

  // line through the origin, target slope
  {
    const auto x = oracle::linspace(7000.0, 8000.0, 500);
    std::vector<double> yt(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) yt[i] = 1.1e-3 * x[i];
    int hits = 0;
    for (int k = 1; k <= kTrials; ++k) {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = yt[i] * (1.0 + 0.05 * rng::normal(30000 + k, i));
      const FitResult fr = fit_linear_origin(x, y);
      hits += std::abs(fr.param("slope") - 1.1e-3) <= 2.0 * fr.sigma("slope")
                  ? 1
                  : 0;
    }
    CHECK(hits == 189);
  }
}
