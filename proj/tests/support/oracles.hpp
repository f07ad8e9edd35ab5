#pragma once

// Reference computations written independently of the library code paths they check.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

#include "hybridcast/convlstm.hpp"
#include "hybridcast/fusion.hpp"

namespace oracle {

struct ScalarState {
  std::vector<double> h, c;
};

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// The five gate equations evaluated one hidden unit at a time. Unit u sits at feature position
// u / filters and channel u % filters; the kernel tap j reads feature position + j - k/2, zero
// outside the feature axis.
inline ScalarState cell(const std::vector<double>& x, const ScalarState& prev, const hybridcast::convlstm::Params& p) {
  using hybridcast::convlstm::Gate;
  const auto& s = p.shape();
  const int k = static_cast<int>(s.kernel);
  const int F = static_cast<int>(s.features);
  const std::size_t H = s.hidden();

  auto pre = [&](Gate g, std::size_t u) {
    const int pos = static_cast<int>(u / s.filters);
    const std::size_t ch = u % s.filters;
    double z = p.bias(g)[u];
    for (int j = 0; j < k; ++j) {
      const int src = pos + j - k / 2;
      if (src >= 0 && src < F) z += p.kernel(g)[ch * s.kernel + static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(src)];
    }
    for (std::size_t m = 0; m < H; ++m) z += p.recurrent(g)[u * H + m] * prev.h[m];
    return z;
  };

  ScalarState next{std::vector<double>(H), std::vector<double>(H)};
  for (std::size_t u = 0; u < H; ++u) {
    const double i = logistic(pre(Gate::input, u));
    const double f = logistic(pre(Gate::forget, u));
    const double cand = std::tanh(pre(Gate::candidate, u));
    next.c[u] = f * prev.c[u] + i * cand;
    const double o = logistic(pre(Gate::output, u));
    next.h[u] = o * std::tanh(next.c[u]);
  }
  return next;
}

inline double forward(const hybridcast::Matrix& window, const hybridcast::convlstm::Params& p) {
  const std::size_t H = p.shape().hidden();
  ScalarState st{std::vector<double>(H, 0.0), std::vector<double>(H, 0.0)};
  for (std::size_t t = 0; t < window.rows(); ++t) {
    std::vector<double> x(window.cols());
    for (std::size_t f = 0; f < window.cols(); ++f) x[f] = window(t, f);
    st = cell(x, st, p);
  }
  double y = p.readout_bias();
  for (std::size_t u = 0; u < H; ++u) y += p.readout_weights()[u] * st.h[u];
  return y;
}

// Window count by enumeration of start positions.
inline std::size_t brute_window_count(std::size_t n, std::size_t L, std::size_t horizon, std::size_t stride) {
  std::size_t count = 0;
  for (std::size_t start = 0; start + L - 1 + horizon < n; start += stride) ++count;
  return count;
}

struct Ols {
  double a, b, c;
};

// actual ~ a*p + b*s + c by Householder QR, never forming the normal equations.
inline Ols least_squares(const std::vector<hybridcast::fusion::FusionRecord>& records) {
  const Eigen::Index n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& rec = records[static_cast<std::size_t>(r)];
    X(r, 0) = rec.lstm_prediction;
    X(r, 1) = rec.w_cs;
    X(r, 2) = 1.0;
    y(r) = *rec.actual;
  }
  const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(y);
  return {beta(0), beta(1), beta(2)};
}

}  // namespace oracle
