#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bspin::quad {

struct Rule {
  std::vector<long double> nodes;
  std::vector<long double> weights;
  std::size_t size() const noexcept { return nodes.size(); }
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(long double v) noexcept {
    const long double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
  }
  long double value() const noexcept { return sum_ + comp_; }

 private:
  long double sum_ = 0;
  long double comp_ = 0;
};

/// m-point Gauss-Hermite rule for weight exp(-t^2) on the real line, nodes ascending.
inline Rule gauss_hermite(int m) {
  if (m < 1) throw std::invalid_argument("Gauss-Hermite rule needs at least one node");
  constexpr long double kEps = 1e-18L;
  const long double pim4 = 1.0L / std::pow(std::numbers::pi_v<long double>, 0.25L);
  Rule r;
  r.nodes.assign(m, 0);
  r.weights.assign(m, 0);
  long double z = 0;
  long double pp = 0;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // asymptotic starting guesses for the largest roots
    if (i == 0) z = std::sqrt(2.0L * m + 1) - 1.85575L * std::pow(2.0L * m + 1, -1.0L / 6);
    else if (i == 1) z -= 1.14L * std::pow(static_cast<long double>(m), 0.426L) / z;
    else if (i == 2) z = 1.86L * z - 0.86L * r.nodes[0];
    else if (i == 3) z = 1.91L * z - 0.91L * r.nodes[1];
    else z = 2.0L * z - r.nodes[i - 2];
    for (int it = 0; it < 100; ++it) {
      long double p1 = pim4, p2 = 0;
      for (int j = 1; j <= m; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0L / j) * p2 - std::sqrt(static_cast<long double>(j - 1) / j) * p3;
      }
      pp = std::sqrt(2.0L * m) * p2;
      const long double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= kEps * std::max(1.0L, std::fabs(z))) break;
    }
    r.nodes[i] = z;
    r.nodes[m - 1 - i] = -z;
    r.weights[i] = r.weights[m - 1 - i] = 2.0L / (pp * pp);
  }
  if (m % 2 == 1) r.nodes[m / 2] = 0;
  std::vector<long double> nodes(r.nodes.rbegin(), r.nodes.rend());
  std::vector<long double> weights(r.weights.rbegin(), r.weights.rend());
  return Rule{std::move(nodes), std::move(weights)};
}

/// m-point Gauss-Legendre rule on [-1, 1], nodes ascending.
inline Rule gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  constexpr long double kEps = 1e-18L;
  Rule r;
  r.nodes.assign(m, 0);
  r.weights.assign(m, 0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (m + 0.5L));
    long double pp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p1 = 1, p2 = 0;
      for (int j = 1; j <= m; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j - 1) * z * p2 - (j - 1.0L) * p3) / j;
      }
      pp = m * (z * p1 - p2) / (z * z - 1);
      const long double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= kEps) break;
    }
    r.nodes[i] = -z;
    r.nodes[m - 1 - i] = z;
    r.weights[i] = r.weights[m - 1 - i] = 2.0L / ((1 - z * z) * pp * pp);
  }
  if (m % 2 == 1) r.nodes[m / 2] = 0;
  return r;
}

}  // namespace bspin::quad
