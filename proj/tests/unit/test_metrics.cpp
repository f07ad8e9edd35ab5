#include <doctest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "hybridcast/errors.hpp"
#include "hybridcast/metrics.hpp"

using namespace hybridcast;
using namespace hybridcast::metrics;

namespace {

MetricReport with_mae(double mae, std::size_t n) {
  MetricReport r;
  r.mae = mae;
  r.mse = mae * mae;
  r.rmse = mae;
  r.mape = 1.0;
  r.n = n;
  return r;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("hand-computed example") {
    const std::vector<double> actual{100, 200, 50};
    const std::vector<double> pred{110, 190, 50};
    const auto r = compute_metrics(actual, pred);
    CHECK(r.n == 3);
    CHECK(r.mae == doctest::Approx(20.0 / 3.0).epsilon(1e-15));
    CHECK(r.mse == doctest::Approx(200.0 / 3.0).epsilon(1e-15));
    CHECK(r.rmse == doctest::Approx(std::sqrt(200.0 / 3.0)).epsilon(1e-15));
    // (10/100 + 10/200 + 0) / 3, in percent.
    CHECK(r.mape == doctest::Approx(5.0).epsilon(1e-14));
  }

  TEST_CASE("perfect prediction is all zeros") {
    const std::vector<double> v{1, 2, 3};
    const auto r = compute_metrics(v, v);
    CHECK(r.mae == 0.0);
    CHECK(r.rmse == 0.0);
    CHECK(r.mape == 0.0);
  }

  TEST_CASE("errors") {
    const std::vector<double> five{1, 2, 3, 4, 5}, four{1, 2, 3, 4};
    CHECK_THROWS_WITH_AS(compute_metrics(five, four), doctest::Contains("length mismatch"), DataError);
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{}, std::vector<double>{}), DataError);
    const std::vector<double> zero{1, 0, 2}, p{1, 1, 1};
    CHECK_THROWS_WITH_AS(compute_metrics(zero, p), doctest::Contains("index 1"), DataError);
    const auto no_mape = compute_metrics(zero, p, false);
    CHECK_FALSE(no_mape.has_mape);
    CHECK(no_mape.mae == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("property: rmse squared is mse, mae at most rmse, scale behaviour") {
    testgen::Gen g(71);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = g.size(1, 100);
      const auto actual = g.vec(n, 1.0, 1000.0);
      const auto pred = g.vec(n, 1.0, 1000.0);
      const auto r = compute_metrics(actual, pred);
      REQUIRE(std::abs(r.rmse * r.rmse - r.mse) <= 1e-12 * std::max(1.0, r.mse));
      REQUIRE(r.mae <= r.rmse * (1 + 1e-12));
      REQUIRE(r.mae >= 0.0);
      REQUIRE(r.mape >= 0.0);

      // Scaling both series leaves MAPE unchanged and scales MAE linearly.
      std::vector<double> a2 = actual, p2 = pred;
      for (auto& x : a2) x *= 3.0;
      for (auto& x : p2) x *= 3.0;
      const auto s = compute_metrics(a2, p2);
      REQUIRE(s.mae == doctest::Approx(3.0 * r.mae).epsilon(1e-12));
      REQUIRE(s.mape == doctest::Approx(r.mape).epsilon(1e-12));
    }
  }

  TEST_CASE("improvement percent") {
    CHECK(improvement_percent(3.258327, 1.605440) == doctest::Approx(50.7280).epsilon(1e-5));
    CHECK(improvement_percent(2.0, 2.0) == 0.0);
    CHECK(improvement_percent(0.0, 0.0) == 0.0);
    CHECK(improvement_percent(1.0, 1.5) == -50.0);
  }

  TEST_CASE("comparison table, text and csv") {
    const auto base = with_mae(3.258327, 40), hybrid = with_mae(1.605440, 40);
    const std::string text = compare_report(base, hybrid);
    CHECK(text.find("Mean Absolute Error (MAE)") != std::string::npos);
    CHECK(text.find("50.73%") != std::string::npos);
    CHECK(text.find("n=40") != std::string::npos);
    const std::string csv = compare_report(base, hybrid, Format::csv);
    CHECK(csv.rfind("metric,conv_lstm,hybrid,improvement_pct\n", 0) == 0);
    CHECK(csv.find("mae,3.258327,1.605440,50.73\n") != std::string::npos);
    CHECK(parse_format("csv") == Format::csv);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
  }

  TEST_CASE("comparison needs matching sample counts") {
    CHECK_THROWS_AS(compare_report(with_mae(1, 10), with_mae(1, 11)), DataError);
  }

  TEST_CASE("single report") {
    const std::vector<double> a{2, 4}, p{1, 5};
    const std::string csv = metrics_report(compute_metrics(a, p), Format::csv);
    CHECK(csv.find("mae,1") != std::string::npos);
    CHECK(metrics_report(compute_metrics(a, p)).find("MAE") != std::string::npos);
  }
}
