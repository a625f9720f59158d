#pragma once

/**
 * @file asymptotics.hpp
 * @brief Limit density of the rescaled measure and its normalisation checks.
 *
 * With x = a / sqrt(N), the scaled pmf (sqrt(N)/2)^n mu_N(a) approaches
 *
 *     phi(x) = c_n prod_{i<j} (x_i^2 - x_j^2)^2 prod_l x_l^2 exp(-|x|^2 / 2)
 *     c_n    = 2^{2n} n! / ((2 pi)^{n/2} (2n)! (2n-2)! ... 2!)
 *
 * phi is invariant under signed permutations, so its integral over R^n is
 * 2^n n! times the integral over the chamber x_1 > ... > x_n > 0. The
 * polynomial part has degree 4n - 2 in each variable, which an
 * m-point Gauss-Hermite rule integrates exactly once m >= 2n.
 */

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exact.hpp"
#include "lattice.hpp"
#include "quadrature.hpp"

namespace bspin {

namespace detail {

/// prod_{i<j} (x_i^2 - x_j^2)^2 prod_l x_l^2
inline long double vandermonde_square(std::span<const double> x) {
  long double p = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double xi2 = static_cast<long double>(x[i]) * x[i];
    p *= xi2;
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const long double d = xi2 - static_cast<long double>(x[j]) * x[j];
      p *= d * d;
    }
  }
  return p;
}

inline long double double_factorial_product(int n) {
  long double den = 1, f = 1;
  for (int k = 1; k <= 2 * n; ++k) {
    f *= k;
    if (k % 2 == 0) den *= f;
  }
  return den;
}

inline void require_length(Rank n, std::span<const double> x) {
  if (x.size() != n.size()) throw DomainError("point length does not match rank");
}

}  // namespace detail

class LimitDensity {
 public:
  explicit LimitDensity(Rank n) : n_(n) {
    long double nf = 1;
    for (int j = 2; j <= n.value(); ++j) nf *= j;
    norm_const_ = std::pow(4.0L, n.value()) * nf /
                  (std::pow(2 * std::numbers::pi_v<long double>, n.value() / 2.0L) *
                   detail::double_factorial_product(n.value()));
  }

  Rank rank() const noexcept { return n_; }
  long double norm_const() const noexcept { return norm_const_; }

  /// phi(x) * exp(|x|^2 / 2): the part a Gauss-Hermite rule sees.
  long double polynomial_part(std::span<const double> x) const {
    detail::require_length(n_, x);
    return norm_const_ * detail::vandermonde_square(x);
  }

  double operator()(std::span<const double> x) const {
    long double r2 = 0;
    for (double v : x) r2 += static_cast<long double>(v) * v;
    return static_cast<double>(polynomial_part(x) * std::exp(-r2 / 2));
  }

  /// ln phi(x); -infinity on walls.
  double log(std::span<const double> x) const {
    detail::require_length(n_, x);
    long double s = std::log(norm_const_);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double xi2 = static_cast<long double>(x[i]) * x[i];
      s += std::log(xi2) - xi2 / 2;
      for (std::size_t j = i + 1; j < x.size(); ++j) {
        s += 2 * std::log(std::fabs(xi2 - static_cast<long double>(x[j]) * x[j]));
      }
    }
    return static_cast<double>(s);
  }

 private:
  Rank n_;
  long double norm_const_;
};

inline double phi(const LimitDensity& d, std::span<const double> x) { return d(x); }

/// Radial part of the invariant measure on so(2n+1): 2^{n^2} / (pi^n n!) * Vandermonde^2 * prod x^2.
class RadialDensity {
 public:
  explicit RadialDensity(Rank n) : n_(n) {
    long double nf = 1;
    for (int j = 2; j <= n.value(); ++j) nf *= j;
    const int r = n.value();
    constant_ = std::pow(2.0L, r * r) / (std::pow(std::numbers::pi_v<long double>, r) * nf);
  }

  Rank rank() const noexcept { return n_; }
  long double constant() const noexcept { return constant_; }

  double operator()(std::span<const double> x) const {
    detail::require_length(n_, x);
    return static_cast<double>(constant_ * detail::vandermonde_square(x));
  }

 private:
  Rank n_;
  long double constant_;
};

inline double radial_density(const RadialDensity& r, std::span<const double> x) { return r(x); }

struct HermiteOptions {
  int nodes_per_axis = 0;  ///< 0 picks the default for the integrand
  int max_rank = 4;
  double max_points = 5e7;  ///< budget on the tensor grid size
};

namespace detail {

/// sum over the tensor grid of prod w * f(sqrt(2) t); integrates f(x) exp(-|x|^2/2) up to 2^{n/2}.
template <class Poly>
long double hermite_tensor_sum(int dims, const quad::Rule& rule, Poly&& poly) {
  const std::size_t m = rule.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
  std::vector<double> x(static_cast<std::size_t>(dims));
  const long double sqrt2 = std::numbers::sqrt2_v<long double>;
  quad::CompensatedSum acc;
  while (true) {
    long double w = 1;
    for (int i = 0; i < dims; ++i) {
      w *= rule.weights[idx[i]];
      x[i] = static_cast<double>(sqrt2 * rule.nodes[idx[i]]);
    }
    acc.add(w * poly(std::span<const double>(x)));
    int k = 0;
    while (k < dims && ++idx[k] == m) idx[k++] = 0;
    if (k == dims) break;
  }
  return acc.value() * std::pow(2.0L, dims / 2.0L);
}

inline void check_grid_budget(int dims, int nodes, const HermiteOptions& opt) {
  if (std::pow(static_cast<double>(nodes), dims) > opt.max_points) {
    throw QuadratureError("tensor grid of " + std::to_string(nodes) + "^" + std::to_string(dims) +
                              " points exceeds the quadrature budget",
                          std::nan(""));
  }
}

}  // namespace detail

/// Integral of phi over the main chamber: tensor Gauss-Hermite over R^n divided by 2^n n!.
inline double chamber_norm(Rank n, const HermiteOptions& opt = {}) {
  if (n.value() > opt.max_rank) {
    throw DomainError("chamber_norm configured for rank <= " + std::to_string(opt.max_rank));
  }
  const int min_nodes = 2 * n.value() + 1;
  const int nodes = opt.nodes_per_axis ? opt.nodes_per_axis : 2 * n.value() + 3;
  if (nodes < min_nodes) {
    throw QuadratureError("chamber_norm needs at least " + std::to_string(min_nodes) +
                              " nodes per axis for rank " + std::to_string(n.value()),
                          std::nan(""));
  }
  detail::check_grid_budget(n.value(), nodes, opt);
  const LimitDensity d(n);
  const auto rule = quad::gauss_hermite(nodes);
  const long double total = detail::hermite_tensor_sum(
      n.value(), rule, [&](std::span<const double> x) { return d.polynomial_part(x); });
  return static_cast<double>(total / n.weyl_order());
}

/// prod_{j=1}^n Gamma(1 + 2 j gamma) / Gamma(1 + gamma) = prod (2 j gamma)! / gamma!
inline BigInt macdonald_rhs(Rank n, int gamma) {
  if (gamma < 0) throw DomainError("Macdonald exponent must be >= 0");
  const FactorialTable f(2 * n.value() * gamma);
  BigInt num = 1, den = 1;
  for (int j = 1; j <= n.value(); ++j) {
    num *= f(2 * j * gamma);
    den *= f(gamma);
  }
  BigInt q, r;
  boost::multiprecision::divide_qr(num, den, q, r);
  if (r != 0) throw std::logic_error("Macdonald product is not integral");
  return q;
}

/// (2 pi)^{-n/2} int prod (2 x_i^2)^g prod |x_i^2 - x_j^2|^{2g} exp(-|x|^2/2) dx by Gauss-Hermite.
inline double macdonald_lhs_quadrature(Rank n, int gamma = 1, const HermiteOptions& opt = {}) {
  if (gamma < 0) throw DomainError("Macdonald exponent must be >= 0");
  const int r = n.value();
  // per-variable degree is 2 gamma (2n - 1); exactness needs 2m - 1 >= that
  const int min_nodes = gamma * (2 * r - 1) + 1;
  const int nodes = opt.nodes_per_axis ? opt.nodes_per_axis : min_nodes + 1;
  if (nodes < min_nodes) {
    throw QuadratureError("Macdonald quadrature needs at least " + std::to_string(min_nodes) +
                              " nodes per axis",
                          std::nan(""));
  }
  detail::check_grid_budget(r, nodes, opt);
  const auto rule = quad::gauss_hermite(nodes);
  const long double total =
      detail::hermite_tensor_sum(r, rule, [&](std::span<const double> x) -> long double {
        long double p = 1;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const long double xi2 = static_cast<long double>(x[i]) * x[i];
          p *= std::pow(2 * xi2, gamma);
          for (std::size_t j = i + 1; j < x.size(); ++j) {
            p *= std::pow(std::fabs(xi2 - static_cast<long double>(x[j]) * x[j]), 2 * gamma);
          }
        }
        return p;
      });
  return static_cast<double>(total / std::pow(2 * std::numbers::pi_v<long double>, r / 2.0L));
}

}  // namespace bspin
