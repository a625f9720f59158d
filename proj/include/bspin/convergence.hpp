#pragma once

/**
 * @file convergence.hpp
 * @brief Finite-N convergence diagnostics: pointwise ratio error of
 *        the scaled pmf against phi, box probabilities against integrals of
 *        phi, and exact sampling from the discrete measure.
 *
 * Rescaled coordinates are x = a / sqrt(N). A lattice point with
 * a-coordinates a carries mass mu_N(a), which corresponds to a density of
 * (sqrt(N)/2)^n mu_N(a) at x because neighbouring points of one parity sit
 * 2 / sqrt(N) apart on every axis.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "lattice.hpp"
#include "quadrature.hpp"

namespace bspin {

/// Half-open box [lower_i, upper_i) in rescaled coordinates. Empty boxes (lower == upper) are allowed.
class Orthotope {
 public:
  Orthotope(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.empty()) {
      throw DomainError("orthotope bounds must be nonempty and of equal length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || lower_[i] > upper_[i]) {
        throw DomainError("orthotope needs lower <= upper on every axis");
      }
    }
  }

  std::size_t dims() const noexcept { return lower_.size(); }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }

  bool contains(std::span<const double> x) const noexcept {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(lower_[i] <= x[i] && x[i] < upper_[i])) return false;
    }
    return true;
  }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

inline std::vector<double> rescale(std::span<const int> a, int power) {
  const double s = std::sqrt(static_cast<double>(power));
  std::vector<double> x(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) x[i] = a[i] / s;
  return x;
}

struct LocalError {
  double max_rel_err = 0;
  APoint argmax;
  std::size_t points = 0;
};

/// max |mu_N(a) (sqrt(N)/2)^n / phi(a / sqrt(N)) - 1| over support points with
/// max_i |a_i| + 2n - 1 < sqrt(N) C.
inline LocalError local_error(Rank n, int power, double cutoff) {
  require_power(power);
  if (!(cutoff > 0)) throw DomainError("cutoff must be positive");
  const double radius = std::sqrt(static_cast<double>(power)) * cutoff;
  const int shift = 2 * n.value() - 1;
  const double top = std::min<double>(support_bound(n, power), std::ceil(radius - shift));
  std::vector<int> lo(n.size(), 0);
  std::vector<int> hi(n.size(), static_cast<int>(std::max(top, 0.0)));

  const LimitDensity density(n);
  const double log_scale = n.value() * std::log(std::sqrt(static_cast<double>(power)) / 2);
  LocalError out;
  bool found = false;
  for_each_support_point(n, power, lo, hi, [&](std::span<const int> a) {
    if (!(static_cast<double>(a.front() + shift) < radius)) return;
    ++out.points;
    const auto x = rescale(a, power);
    const double diff = log_pmf(n, power, a) + log_scale - density.log(x);
    const double err = std::fabs(std::expm1(diff));
    if (!found || err > out.max_rel_err) {
      out.max_rel_err = err;
      out.argmax = APoint(std::vector<int>(a.begin(), a.end()));
      found = true;
    }
  });
  if (!found) {
    throw DomainError("no support point satisfies the cutoff for n=" + std::to_string(n.value()) +
                      ", N=" + std::to_string(power));
  }
  return out;
}

struct LocalErrorRow {
  int power;
  double cutoff;
  double max_rel_err;
  APoint argmax;
};

inline std::vector<LocalErrorRow> local_error_report(Rank n, std::span<const int> powers,
                                                     double cutoff) {
  std::vector<LocalErrorRow> rows;
  for (int p : powers) {
    auto e = local_error(n, p, cutoff);
    rows.push_back({p, cutoff, e.max_rel_err, std::move(e.argmax)});
  }
  return rows;
}

/// Least-squares slope of ln(err) against ln(N).
inline double loglog_slope(std::span<const LocalErrorRow> rows) {
  if (rows.size() < 2) throw DomainError("slope fit needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double lx = std::log(static_cast<double>(r.power));
    const double ly = std::log(r.max_rel_err);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

namespace detail {

inline void require_box_rank(Rank n, const Orthotope& box) {
  if (box.dims() != n.size()) throw DomainError("orthotope dimension does not match rank");
}

inline int clamp_to_int(double v, int lo, int hi) {
  if (std::isnan(v)) return lo;
  return static_cast<int>(std::clamp(v, static_cast<double>(lo), static_cast<double>(hi)));
}

}  // namespace detail

/// P{ c_i <= X_i / sqrt(N) < d_i } as an exact rational.
inline Rational orthotope_prob_discrete(Rank n, int power, const Orthotope& box) {
  require_power(power);
  detail::require_box_rank(n, box);
  if (power == 0) throw DomainError("rescaled coordinates need N >= 1");
  const double s = std::sqrt(static_cast<double>(power));
  const int bound = support_bound(n, power);
  std::vector<int> lo(n.size()), hi(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    lo[i] = detail::clamp_to_int(std::floor(box.lower()[i] * s) - 1, 0, bound + 1);
    hi[i] = detail::clamp_to_int(std::ceil(box.upper()[i] * s), -1, bound);
  }
  ClosedFormMultiplicity mult(n, power);
  BigInt mass = 0;
  for_each_support_point(n, power, lo, hi, [&](std::span<const int> a) {
    if (!box.contains(rescale(a, power))) return;
    mass += mult(a) * dim_irrep(n, a);
  });
  return Rational(mass, total_dimension(n, power));
}

struct LimitQuadratureOptions {
  int panel_nodes = 16;
  int max_depth = 40;
  long long max_evaluations = 400'000'000;
};

namespace detail {

/// Iterated adaptive Gauss-Legendre over box ∩ {x_1 >= ... >= x_n >= 0}.
/// The chamber constraint is carried in the integration limits of each axis, and
/// every axis is split where an inner limit switches, so panels see a smooth integrand.
class ChamberBoxIntegrator {
 public:
  ChamberBoxIntegrator(const LimitDensity& density, const Orthotope& box,
                       const LimitQuadratureOptions& opt)
      : density_(density), opt_(opt), rule_(quad::gauss_legendre(opt.panel_nodes)) {
    // phi is below 1e-30 of its mass once any coordinate passes this
    const double cutoff = 2.0 * density.rank().value() + 12.0;
    for (std::size_t i = 0; i < box.dims(); ++i) {
      lo_.push_back(std::clamp(box.lower()[i], 0.0, cutoff));
      hi_.push_back(std::clamp(box.upper()[i], 0.0, cutoff));
    }
  }

  double integrate(double tol) {
    std::vector<double> x(lo_.size());
    return axis(0, x, tol);
  }

  bool exhausted() const noexcept { return failed_; }
  long long evaluations() const noexcept { return evaluations_; }

 private:
  double axis(std::size_t i, std::vector<double>& x, double tol) {
    const double lower = lo_[i];
    const double upper = i == 0 ? hi_[0] : std::min(hi_[i], x[i - 1]);
    if (!(upper > lower)) return 0.0;
    std::vector<double> cuts{lower, upper};
    for (std::size_t j = i + 1; j < lo_.size(); ++j) {
      for (double c : {lo_[j], hi_[j]}) {
        if (c > lower && c < upper) cuts.push_back(c);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double width = upper - lower;
    const double inner_tol = 0.5 * tol / std::max(width, 1.0);
    auto g = [&](double t) -> double {
      x[i] = t;
      if (i + 1 == lo_.size()) {
        ++evaluations_;
        return density_(x);
      }
      return axis(i + 1, x, inner_tol);
    };
    double total = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      const double share = 0.5 * tol * (b - a) / width;
      total += adapt(g, a, b, panel(g, a, b), share, 0);
    }
    return total;
  }

  template <class G>
  double panel(G& g, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    quad::CompensatedSum acc;
    for (std::size_t k = 0; k < rule_.size(); ++k) {
      acc.add(rule_.weights[k] * g(mid + half * static_cast<double>(rule_.nodes[k])));
    }
    return static_cast<double>(acc.value() * half);
  }

  template <class G>
  double adapt(G& g, double a, double b, double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = panel(g, a, mid);
    const double right = panel(g, mid, b);
    const double refined = left + right;
    if (std::fabs(refined - whole) <= tol) return refined;
    if (depth >= opt_.max_depth || evaluations_ > opt_.max_evaluations) {
      failed_ = true;
      return refined;
    }
    return adapt(g, a, mid, left, 0.5 * tol, depth + 1) +
           adapt(g, mid, b, right, 0.5 * tol, depth + 1);
  }

  const LimitDensity& density_;
  LimitQuadratureOptions opt_;
  quad::Rule rule_;
  std::vector<double> lo_, hi_;
  long long evaluations_ = 0;
  bool failed_ = false;
};

}  // namespace detail

/// Integral of phi over the box intersected with the closed main chamber.
inline double orthotope_prob_limit(Rank n, const Orthotope& box, double tol,
                                   const LimitQuadratureOptions& opt = {}) {
  detail::require_box_rank(n, box);
  if (!(tol > 0)) throw DomainError("quadrature tolerance must be positive");
  const LimitDensity density(n);
  detail::ChamberBoxIntegrator integrator(density, box, opt);
  const double value = integrator.integrate(tol);
  if (integrator.exhausted()) {
    throw QuadratureError("limit box probability did not reach tolerance " + std::to_string(tol) +
                              " within the evaluation budget",
                          value);
  }
  return value;
}

inline double global_gap(Rank n, int power, const Orthotope& box, double tol = 1e-10) {
  const double discrete = to_double(orthotope_prob_discrete(n, power, box));
  return std::fabs(discrete - orthotope_prob_limit(n, box, tol));
}

/// i.i.d. draws from mu_N by inverting the exact cumulative table against k / 2^64,
/// k uniform from a 64-bit Mersenne twister seeded with `seed`.
inline std::vector<APoint> sample(Rank n, int power, std::size_t count, std::uint64_t seed) {
  require_table_size(n, power);
  if (count == 0) return {};
  const auto table = decomposition_table(n, power);
  const unsigned total_bits = static_cast<unsigned>(n.value() * power);
  // cumulative masses scaled by 2^64 so a draw compares as integers: k 2^{nN} < S_i 2^64
  std::vector<BigInt> cumulative;
  cumulative.reserve(table.rows.size());
  BigInt running = 0;
  for (const auto& row : table.rows) {
    running += row.multiplicity * row.dimension;
    cumulative.push_back(running << 64);
  }
  std::mt19937_64 rng(seed);
  std::vector<APoint> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const BigInt scaled_draw = BigInt(rng()) << total_bits;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), scaled_draw);
    out.push_back(table.rows[static_cast<std::size_t>(it - cumulative.begin())].a);
  }
  return out;
}

}  // namespace bspin
