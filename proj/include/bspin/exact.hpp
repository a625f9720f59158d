#pragma once

/**
 * @file exact.hpp
 * @brief Multiplicities, dimensions and the probability mass function of
 *        (spinor)^{(x)N} for B_n, in exact arithmetic.
 *
 * The tensor power decomposes as a sum of irreducibles L^lambda with
 * multiplicity M_lambda. Weighting each component by its dimension and
 * dividing by 2^{nN} gives a probability measure on dominant weights:
 *
 *     mu_N(a) = M(a) * dim(a) / 2^{nN}
 *
 * where, in a-coordinates,
 *
 *     M(a)   = prod_{k=0}^{n-1} (N+2k)! / (4^k A_k! B_k!) * prod_l a_l * prod_{i<j} (a_i^2 - a_j^2)
 *     A_k    = (N + a_{k+1} + 2n - 1) / 2,   B_k = (N - a_{k+1} + 2n - 1) / 2
 *     dim(a) = prod_{i<j} (a_i^2 - a_j^2) prod_l a_l * n! 2^{2n - n^2} / ((2n)! (2n-2)! ... 2!)
 *
 * M is defined on the whole lattice (of the right parity) and is
 * antisymmetric under signed permutations.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "lattice.hpp"

namespace bspin {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Tensor powers above this are refused by the exact (factorial) path.
inline constexpr int kMaxExactPower = 2000;
/// Decomposition tables larger than this many rows are refused.
inline constexpr double kMaxTableRows = 200000;

inline BigInt pow2(unsigned e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// 0!, 1!, ..., max! computed once.
class FactorialTable {
 public:
  explicit FactorialTable(int max) : f_(static_cast<std::size_t>(std::max(max, 0)) + 1) {
    f_[0] = 1;
    for (std::size_t i = 1; i < f_.size(); ++i) f_[i] = f_[i - 1] * static_cast<unsigned>(i);
  }

  const BigInt& operator()(int k) const { return f_.at(static_cast<std::size_t>(k)); }
  int max() const noexcept { return static_cast<int>(f_.size()) - 1; }

 private:
  std::vector<BigInt> f_;
};

inline void require_rank_length(Rank n, std::span<const int> a) {
  if (a.size() != n.size()) {
    throw DomainError("point has " + std::to_string(a.size()) + " coordinates, rank is " +
                      std::to_string(n.value()));
  }
}

inline void require_power_parity(std::span<const int> a, int power) {
  if (!has_power_parity(a, power)) {
    throw ParityError("a-coordinates must all be " +
                      std::string(support_parity(power) ? "odd" : "even") + " for power " +
                      std::to_string(power));
  }
}

inline void require_power(int power) {
  if (power < 0) throw DomainError("tensor power must be >= 0");
}

/// prod_l a_l * prod_{i<j} (a_i^2 - a_j^2), the antisymmetric factor shared by M and dim.
inline BigInt weyl_numerator(std::span<const int> a) {
  BigInt p = 1;
  for (int v : a) p *= v;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      p *= BigInt(a[i]) * a[i] - BigInt(a[j]) * a[j];
    }
  }
  return p;
}

/// Closed-form extended multiplicity for one (n, N); keeps the factorials it needs.
class ClosedFormMultiplicity {
 public:
  ClosedFormMultiplicity(Rank n, int power)
      : n_(n), power_(checked_power(power)), fact_(power + 2 * n.value() - 1) {
    numerator_const_ = 1;
    unsigned two_exp = 0;
    for (int k = 0; k < n.value(); ++k) {
      numerator_const_ *= fact_(power + 2 * k);
      two_exp += 2 * static_cast<unsigned>(k);
    }
    denominator_const_ = pow2(two_exp);
  }

  Rank rank() const noexcept { return n_; }
  int power() const noexcept { return power_; }

  static int checked_power(int power) {
    require_power(power);
    if (power > kMaxExactPower) {
      throw SizeLimitError("exact path supports tensor powers up to " +
                           std::to_string(kMaxExactPower));
    }
    return power;
  }

  /// Signed value on any lattice point of the right parity; 0 outside |a_i| <= N + 2n - 1.
  BigInt operator()(std::span<const int> a) const {
    require_rank_length(n_, a);
    require_power_parity(a, power_);
    const int bound = support_bound(n_, power_);
    for (int v : a) {
      if (std::abs(v) > bound) return 0;
    }
    BigInt num = weyl_numerator(a);
    if (num == 0) return 0;
    num *= numerator_const_;
    BigInt den = denominator_const_;
    const int shift = power_ + 2 * n_.value() - 1;
    for (int v : a) {
      den *= fact_((shift + v) / 2);
      den *= fact_((shift - v) / 2);
    }
    BigInt q, r;
    boost::multiprecision::divide_qr(num, den, q, r);
    if (r != 0) throw std::logic_error("closed-form multiplicity is not integral");
    return q;
  }

 private:
  Rank n_;
  int power_;
  FactorialTable fact_;
  BigInt numerator_const_;
  BigInt denominator_const_;
};

inline BigInt multiplicity_closed(Rank n, int power, std::span<const int> a) {
  return ClosedFormMultiplicity(n, power)(a);
}

inline void require_dominant(Rank n, std::span<const int> a) {
  require_rank_length(n, a);
  if (!is_dominant_regular(a)) throw DomainError("point is not dominant-regular");
}

/// dim L^lambda from the B_n-specialised product formula.
inline BigInt dim_irrep(Rank n, std::span<const int> a) {
  require_dominant(n, a);
  const int r = n.value();
  BigInt num = weyl_numerator(a);
  BigInt den = 1;
  BigInt f = 1;
  for (int k = 1; k <= 2 * r; ++k) {
    f *= k;
    if (k % 2 == 0) den *= f;
  }
  for (int j = 2; j <= r; ++j) num *= j;
  const int two_exp = 2 * r - r * r;
  if (two_exp >= 0) num <<= static_cast<unsigned>(two_exp);
  else den <<= static_cast<unsigned>(-two_exp);
  BigInt q, rem;
  boost::multiprecision::divide_qr(num, den, q, rem);
  if (rem != 0) throw std::logic_error("dimension formula is not integral");
  return q;
}

inline BigInt dim_irrep(Rank n, const APoint& a) { return dim_irrep(n, a.coords()); }

/// dim L^lambda from prod over positive roots of (lambda + rho, alpha) / (rho, alpha).
inline BigInt dim_irrep_weyl(Rank n, std::span<const int> a) {
  require_dominant(n, a);
  const auto rho = doubled_rho(n);
  BigInt num = 1, den = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num *= a[i];  // short roots e_i
    den *= rho[i];
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      num *= a[i] - a[j];  // e_i - e_j
      den *= rho[i] - rho[j];
      num *= a[i] + a[j];  // e_i + e_j
      den *= rho[i] + rho[j];
    }
  }
  BigInt q, rem;
  boost::multiprecision::divide_qr(num, den, q, rem);
  if (rem != 0) throw std::logic_error("Weyl dimension product is not integral");
  return q;
}

/// Total dimension of the tensor power, 2^{nN}.
inline BigInt total_dimension(Rank n, int power) {
  return pow2(static_cast<unsigned>(n.value() * power));
}

/// Probability mass M * dim / 2^{nN}; exact zero off the support.
inline Rational pmf(const ClosedFormMultiplicity& mult, std::span<const int> a) {
  const Rank n = mult.rank();
  require_rank_length(n, a);
  require_power_parity(a, mult.power());
  if (!is_dominant_regular(a) || a.front() > support_bound(n, mult.power())) return Rational(0);
  return Rational(mult(a) * dim_irrep(n, a), total_dimension(n, mult.power()));
}

inline Rational pmf(Rank n, int power, std::span<const int> a) {
  return pmf(ClosedFormMultiplicity(n, power), a);
}

struct DecompositionRow {
  APoint a;
  BigInt multiplicity;
  BigInt dimension;
  Rational probability;
};

struct DecompositionTable {
  Rank n;
  int power;
  std::vector<DecompositionRow> rows;
};

inline void require_table_size(Rank n, int power) {
  require_power(power);
  if (power > kMaxExactPower || support_size(n, power) > kMaxTableRows) {
    throw SizeLimitError("decomposition table for n=" + std::to_string(n.value()) +
                         ", N=" + std::to_string(power) +
                         " exceeds the exact-path limits (N <= " +
                         std::to_string(kMaxExactPower) + ", rows <= " +
                         std::to_string(static_cast<long>(kMaxTableRows)) + ")");
  }
}

/// Full decomposition of the N-th tensor power; sum rules are checked before returning.
inline DecompositionTable decomposition_table(Rank n, int power) {
  require_table_size(n, power);
  ClosedFormMultiplicity mult(n, power);
  const BigInt total = total_dimension(n, power);
  DecompositionTable table{n, power, {}};
  BigInt dim_sum = 0;
  Rational prob_sum = 0;
  for_each_support_point(n, power, [&](std::span<const int> a) {
    DecompositionRow row{APoint(std::vector<int>(a.begin(), a.end())), mult(a), dim_irrep(n, a), 0};
    row.probability = Rational(row.multiplicity * row.dimension, total);
    dim_sum += row.multiplicity * row.dimension;
    prob_sum += row.probability;
    table.rows.push_back(std::move(row));
  });
  if (dim_sum != total || prob_sum != 1) {
    throw std::logic_error("decomposition table violates the dimension sum rule");
  }
  return table;
}

/// Floating log of the pmf through log-gamma; -infinity off the support.
inline double log_pmf(Rank n, int power, std::span<const int> a) {
  require_power(power);
  require_rank_length(n, a);
  require_power_parity(a, power);
  if (!is_dominant_regular(a) || a.front() > support_bound(n, power)) {
    return -std::numeric_limits<double>::infinity();
  }
  const int r = n.value();
  const long double N = power;
  const long double ln2 = std::log(2.0L);
  long double s = 0;
  for (int k = 0; k < r; ++k) {
    const long double ak = a[k];
    s += std::lgamma(N + 2 * k + 1) - 2 * k * ln2;
    s -= std::lgamma((N + ak + 2 * r - 1) / 2 + 1);
    s -= std::lgamma((N - ak + 2 * r - 1) / 2 + 1);
    s += 2 * std::log(ak);
  }
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const long double d = static_cast<long double>(a[i]) * a[i] - static_cast<long double>(a[j]) * a[j];
      s += 2 * std::log(d);
    }
  }
  s += std::lgamma(static_cast<long double>(r) + 1);
  for (int j = 1; j <= r; ++j) s -= std::lgamma(2.0L * j + 1);
  s += (2.0L * r - static_cast<long double>(r) * r - r * N) * ln2;
  return static_cast<double>(s);
}

inline std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

/// Nearest double, safe for numerators and denominators far beyond double range.
inline double to_double(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;
  const long shift = 64 - (static_cast<long>(boost::multiprecision::msb(num)) -
                           static_cast<long>(boost::multiprecision::msb(den)));
  if (shift > 0) num <<= static_cast<unsigned>(shift);
  else den <<= static_cast<unsigned>(-shift);
  const BigInt quotient = num / den;
  const double d = std::ldexp(quotient.convert_to<double>(), static_cast<int>(-shift));
  return negative ? -d : d;
}

}  // namespace bspin
