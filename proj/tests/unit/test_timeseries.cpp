#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "generators.hpp"
#include "hybridcast/errors.hpp"
#include "hybridcast/timeseries.hpp"
#include "oracles.hpp"

using namespace hybridcast;

namespace {

std::string csv_of(const std::vector<std::string>& rows) {
  std::string out(kOhlcvHeader);
  out += '\n';
  for (const auto& r : rows) out += r + '\n';
  return out;
}

Matrix column(std::initializer_list<double> values) {
  Matrix m(values.size(), 1);
  std::size_t i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

}  // namespace

TEST_SUITE("timeseries") {
  TEST_CASE("two well-formed rows parse field by field") {
    const auto s = load_ohlcv(csv_of({"2024-01-02,10,11,9,10.5,10.4,1000", "2024-01-03,10.5,12,10,11.5,11.4,2000"}));
    REQUIRE(s.size() == 2);
    CHECK(s[0].date == parse_date("2024-01-02"));
    CHECK(s[0].open == 10.0);
    CHECK(s[0].high == 11.0);
    CHECK(s[0].low == 9.0);
    CHECK(s[0].close == 10.5);
    CHECK(s[0].adj_close == 10.4);
    CHECK(s[0].volume == 1000.0);
    CHECK(s[1].close == 11.5);
  }

  TEST_CASE("header only is rejected") {
    CHECK_THROWS_WITH_AS(load_ohlcv(csv_of({})), doctest::Contains("no data rows"), DataError);
  }

  TEST_CASE("out-of-order rows come back sorted, matching an external sort") {
    testgen::Gen g(7);
    std::vector<std::pair<std::string, double>> rows;
    for (int d = 1; d <= 28; ++d) {
      char date[16];
      std::snprintf(date, sizeof date, "2023-02-%02d", d);
      rows.emplace_back(date, g.uniform(1.0, 100.0));
    }
    auto shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
    std::vector<std::string> lines;
    for (const auto& [date, close] : shuffled) {
      lines.push_back(date + ",1,1,1," + std::to_string(close) + ",1,5");
    }
    const auto s = load_ohlcv(csv_of(lines));
    std::sort(rows.begin(), rows.end());
    REQUIRE(s.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(format_date(s[i].date) == rows[i].first);
      CHECK(s[i].close == doctest::Approx(rows[i].second).epsilon(1e-6));
    }
  }

  TEST_CASE("malformed rows name their line") {
    CHECK_THROWS_WITH_AS(load_ohlcv(csv_of({"2024-01-02,10,11,9,10.5,10.4,1000", "2024-01-03,10,11"})),
                         doctest::Contains("line 3"), DataError);
    CHECK_THROWS_WITH_AS(load_ohlcv(csv_of({"2024-01-02,10,11,9,abc,10.4,1000"})), doctest::Contains("line 2"),
                         DataError);
    CHECK_THROWS_AS(load_ohlcv("date,close\n2024-01-02,1\n"), DataError);
  }

  TEST_CASE("duplicate dates and non-positive prices are rejected") {
    CHECK_THROWS_AS(load_ohlcv(csv_of({"2024-01-02,1,1,1,1,1,1", "2024-01-02,1,1,1,1,1,1"})), DataError);
    CHECK_THROWS_AS(load_ohlcv(csv_of({"2024-01-02,1,1,1,0,1,1"})), DataError);
    CHECK_THROWS_AS(load_ohlcv(csv_of({"2024-01-02,1,1,-1,1,1,1"})), DataError);
    CHECK_THROWS_AS(load_ohlcv(csv_of({"2024-01-02,1,1,1,1,1,-5"})), DataError);
  }

  TEST_CASE("write then load reproduces the series at 4 decimals") {
    const auto s = load_ohlcv(csv_of({"2024-01-02,10.12344,11,9,10.5,10.4,1000", "2024-01-03,10.5,12,10,11.5,11.4,2000"}));
    const auto back = load_ohlcv(write_ohlcv(s));
    REQUIRE(back.size() == 2);
    CHECK(back[0].open == doctest::Approx(10.1234).epsilon(1e-9));
    CHECK(back[1].volume == 2000.0);
    CHECK(s.find(parse_date("2024-01-03")) == 1);
    CHECK(s.find(parse_date("2024-01-04")) == s.size());
  }

  TEST_CASE("zscore fit of [1, 2, 3]") {
    const auto p = zscore_fit(column({1, 2, 3}));
    CHECK(p.mu[0] == doctest::Approx(2.0).epsilon(1e-15));
    // Hand computation: population variance (1 + 0 + 1) / 3.
    CHECK(p.sigma[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  }

  TEST_CASE("zscore fit errors") {
    CHECK_THROWS_WITH_AS(zscore_fit(column({5, 5, 5})), doctest::Contains("constant feature"), DataError);
    CHECK_THROWS_AS(zscore_fit(column({5})), DataError);
    CHECK(zscore_fit(column({-1, 1})).mu[0] == 0.0);
  }

  TEST_CASE("apply and invert at the anchor points") {
    NormParams p{{3.0, -2.0}, {2.0, 0.5}};
    CHECK(p.apply(3.0, 0) == 0.0);
    CHECK(p.apply(5.0, 0) == 1.0);
    CHECK(p.invert(0.0, 1) == -2.0);
    CHECK(p.invert(1.0, 1) == -1.5);
    Matrix m(1, 2);
    m(0, 0) = 5.0;
    m(0, 1) = -2.0;
    const Matrix z = zscore_apply(m, p);
    CHECK(z(0, 0) == 1.0);
    CHECK(z(0, 1) == 0.0);
    CHECK_THROWS_AS(zscore_apply(column({1, 2}), p), DataError);
    CHECK_THROWS_AS(zscore_invert(column({1, 2}), p), DataError);
  }

  TEST_CASE("self-fit moments of [1, 2, 3]") {
    const Matrix v = column({1, 2, 3});
    const Matrix z = zscore_apply(v, zscore_fit(v));
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < 3; ++i) mean += z(i, 0) / 3.0;
    for (std::size_t i = 0; i < 3; ++i) sq += (z(i, 0) - mean) * (z(i, 0) - mean) / 3.0;
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(std::sqrt(sq) - 1.0) < 1e-12);
  }

  TEST_CASE("property: round trip and self-fit moments on random matrices") {
    testgen::Gen g(101);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = g.size(2, 60), f = g.size(1, 4);
      const double scale = std::pow(10.0, g.uniform(-3.0, 5.0));
      Matrix v = g.matrix(n, f, -scale, scale);
      for (std::size_t c = 0; c < f; ++c) v(0, c) += scale;  // never constant
      const NormParams p = zscore_fit(v);
      const Matrix z = zscore_apply(v, p);
      const Matrix back = zscore_invert(z, p);
      for (std::size_t c = 0; c < f; ++c) {
        double mean = 0.0, sq = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          CHECK(std::abs(back(r, c) - v(r, c)) < 1e-9 * std::max(1.0, scale));
          mean += z(r, c);
        }
        mean /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) sq += (z(r, c) - mean) * (z(r, c) - mean);
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::abs(std::sqrt(sq / static_cast<double>(n)) - 1.0) < 1e-9);
      }
    }
  }

  TEST_CASE("N=10, L=5, horizon 1 gives 5 windows with the enumerated indices") {
    Matrix m(10, 1);
    for (std::size_t i = 0; i < 10; ++i) m(i, 0) = static_cast<double>(i);
    const auto ds = make_windows(m, 5, 1, 1);
    REQUIRE(ds.size() == 5);
    // Window i covers rows i..i+4 and targets row i+5.
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(ds.windows[i].first_index == i);
      CHECK(ds.windows[i].input(0, 0) == static_cast<double>(i));
      CHECK(ds.windows[i].input(4, 0) == static_cast<double>(i + 4));
      CHECK(ds.windows[i].target == static_cast<double>(i + 5));
      CHECK(ds.windows[i].target_index == i + 5);
    }
  }

  TEST_CASE("window boundary cases") {
    Matrix m(6, 2, 1.0);
    CHECK(make_windows(m, 5, 1, 1).size() == 1);
    CHECK(make_windows(m, 3, 3, 1).size() == 1);
    CHECK_THROWS_WITH_AS(make_windows(m.slice_rows(0, 5), 5, 1, 1), doctest::Contains("series too short"), DataError);
    CHECK_THROWS_AS(make_windows(m, 0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_windows(m, 2, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_windows(m, 2, 1, 0), std::invalid_argument);
  }

  TEST_CASE("target column selection") {
    Matrix m(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
      m(i, 0) = static_cast<double>(i);
      m(i, 1) = 10.0 * static_cast<double>(i);
    }
    CHECK(make_windows(m, 2, 1, 1, 1).windows[0].target == 20.0);
  }

  TEST_CASE("property: window count formula and no leakage, brute force sweep") {
    for (std::size_t n = 1; n <= 50; ++n) {
      Matrix m(n, 1);
      for (std::size_t i = 0; i < n; ++i) m(i, 0) = static_cast<double>(i);
      for (std::size_t L = 1; L <= 10; ++L) {
        for (std::size_t h = 1; h <= 3; ++h) {
          for (std::size_t stride = 1; stride <= 4; ++stride) {
            const std::size_t expected = oracle::brute_window_count(n, L, h, stride);
            REQUIRE(window_count(n, L, h, stride) == expected);
            if (expected == 0) continue;
            const auto ds = make_windows(m, L, h, stride);
            REQUIRE(ds.size() == expected);
            for (std::size_t i = 0; i < ds.size(); ++i) {
              const Window& w = ds.windows[i];
              REQUIRE(w.input.rows() == L);
              REQUIRE(w.first_index == i * stride);
              REQUIRE(w.last_input_index() < w.target_index);
              REQUIRE(w.target_index == w.last_input_index() + h);
              REQUIRE(w.input(L - 1, 0) < w.target);
            }
          }
        }
      }
    }
  }

  TEST_CASE("feature matrix follows the requested column order") {
    const auto s = load_ohlcv(csv_of({"2024-01-02,10,11,9,10.5,10.4,1000"}));
    const Matrix m = feature_matrix(s, {Column::volume, Column::close, Column::open});
    CHECK(m(0, 0) == 1000.0);
    CHECK(m(0, 1) == 10.5);
    CHECK(m(0, 2) == 10.0);
    CHECK(parse_column("adj_close") == Column::adj_close);
    CHECK(column_name(Column::high) == "high");
    CHECK_THROWS_AS(parse_column("rsi"), std::invalid_argument);
  }
}
