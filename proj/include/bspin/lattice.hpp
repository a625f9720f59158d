#pragma once

/**
 * @file lattice.hpp
 * @brief Weight-lattice geometry of B_n = so(2n+1).
 *
 * Points are carried in "a-coordinates": the coordinates of lambda + rho in
 * the half-length basis e_i / 2. They are integers, all of one parity, and a
 * dominant weight maps to a strictly decreasing positive vector
 * a_1 > a_2 > ... > a_n > 0. The Weyl vector itself is (2n-1, 2n-3, ..., 1).
 */

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdlib>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace bspin {

/// Rank of the algebra, n >= 1.
class Rank {
 public:
  explicit Rank(int n) : n_(n) {
    if (n < 1) throw DomainError("rank must be >= 1, got " + std::to_string(n));
  }

  int value() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_); }

  /// Order of the Weyl group, 2^n n!.
  long long weyl_order() const noexcept {
    long long w = 1;
    for (int i = 1; i <= n_; ++i) w *= 2LL * i;
    return w;
  }

  auto operator<=>(const Rank&) const = default;

 private:
  int n_;
};

inline int mod2(int v) noexcept { return ((v % 2) + 2) % 2; }

/// Parity every a-coordinate must have for the N-th tensor power.
inline int support_parity(int power) noexcept { return mod2(power + 1); }

/// True when all entries share the parity of the tensor power's congruence class.
inline bool has_power_parity(std::span<const int> a, int power) noexcept {
  const int p = support_parity(power);
  return std::all_of(a.begin(), a.end(), [p](int v) { return mod2(v) == p; });
}

/// a_1 > a_2 > ... > a_n > 0 with uniform parity.
inline bool is_dominant_regular(std::span<const int> a) noexcept {
  if (a.empty() || a.back() <= 0) return false;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    if (a[i] <= a[i + 1]) return false;
  }
  const int p = mod2(a.front());
  return std::all_of(a.begin(), a.end(), [p](int v) { return mod2(v) == p; });
}

/// Doubled Weyl vector (2n-1, 2n-3, ..., 1).
inline std::vector<int> doubled_rho(Rank n) {
  std::vector<int> rho(n.size());
  for (int i = 0; i < n.value(); ++i) rho[i] = 2 * (n.value() - i) - 1;
  return rho;
}

/// Canonical a-coordinates of a dominant weight shifted by rho.
class APoint {
 public:
  APoint() = default;

  explicit APoint(std::vector<int> a) : a_(std::move(a)) {
    if (!is_dominant_regular(a_)) {
      throw DomainError("a-point must be strictly decreasing, positive and of uniform parity: " +
                        to_string());
    }
  }

  std::span<const int> coords() const noexcept { return a_; }
  const std::vector<int>& vec() const noexcept { return a_; }
  std::size_t size() const noexcept { return a_.size(); }
  int operator[](std::size_t i) const { return a_[i]; }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(a_[i]);
    }
    return s + ")";
  }

  auto operator<=>(const APoint&) const = default;

 private:
  std::vector<int> a_;
};

/// lambda = sum m_i omega_i with all m_i >= 0.
class DominantWeight {
 public:
  explicit DominantWeight(std::vector<int> m) : m_(std::move(m)) {
    if (m_.empty()) throw DomainError("dominant weight needs at least one label");
    for (int v : m_) {
      if (v < 0) throw DomainError("Dynkin labels must be nonnegative");
    }
  }

  static DominantWeight zero(Rank n) { return DominantWeight(std::vector<int>(n.size(), 0)); }

  /// Fundamental weight omega_i, 1-based.
  static DominantWeight fundamental(Rank n, int i) {
    std::vector<int> m(n.size(), 0);
    if (i < 1 || i > n.value()) throw DomainError("fundamental weight index out of range");
    m[i - 1] = 1;
    return DominantWeight(std::move(m));
  }

  std::span<const int> labels() const noexcept { return m_; }
  std::size_t size() const noexcept { return m_.size(); }

  auto operator<=>(const DominantWeight&) const = default;

 private:
  std::vector<int> m_;
};

/// a_i = 2 (lambda)_i + (2n - 2i + 1), with (lambda)_i = m_i + ... + m_{n-1} + m_n / 2.
inline APoint a_from_weight(Rank n, const DominantWeight& lambda) {
  if (lambda.size() != n.size()) throw DomainError("weight length does not match rank");
  auto m = lambda.labels();
  std::vector<int> a(n.size());
  int doubled_e = m[n.size() - 1];
  for (int i = n.value() - 1; i >= 0; --i) {
    if (i < n.value() - 1) doubled_e += 2 * m[i];
    a[i] = doubled_e + 2 * (n.value() - i) - 1;
  }
  return APoint(std::move(a));
}

inline DominantWeight weight_from_a(Rank n, std::span<const int> a) {
  if (a.size() != n.size()) throw DomainError("a-point length does not match rank");
  if (!is_dominant_regular(a)) throw DomainError("a-point is not dominant-regular");
  const auto rho = doubled_rho(n);
  std::vector<int> m(n.size());
  for (std::size_t i = 0; i + 1 < n.size(); ++i) {
    m[i] = ((a[i] - rho[i]) - (a[i + 1] - rho[i + 1])) / 2;
  }
  m.back() = a.back() - 1;
  return DominantWeight(std::move(m));
}

inline DominantWeight weight_from_a(Rank n, const APoint& a) { return weight_from_a(n, a.coords()); }

/// Element w of the Weyl group acting by (w a)_i = flips_i * a_{perm_i}.
struct SignedPermutation {
  std::vector<int> perm;   // 0-based
  std::vector<int> flips;  // entries +1 / -1
  int sign = 1;

  std::vector<int> apply(std::span<const int> a) const {
    std::vector<int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = flips[i] * a[perm[i]];
    return out;
  }

  static int permutation_sign(std::span<const int> perm) {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) ++inversions;
    return inversions % 2 ? -1 : 1;
  }
};

/// Visits every signed permutation: permutations in lexicographic order, flip mask ascending.
template <class Fn>
void for_each_weyl_element(Rank n, Fn&& fn) {
  std::vector<int> perm(n.size());
  std::iota(perm.begin(), perm.end(), 0);
  const unsigned masks = 1u << n.value();
  SignedPermutation w;
  w.flips.assign(n.size(), 1);
  do {
    const int psign = SignedPermutation::permutation_sign(perm);
    w.perm = perm;
    for (unsigned mask = 0; mask < masks; ++mask) {
      for (int i = 0; i < n.value(); ++i) w.flips[i] = (mask >> i) & 1u ? -1 : 1;
      w.sign = std::popcount(mask) % 2 ? -psign : psign;
      fn(static_cast<const SignedPermutation&>(w));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline std::vector<SignedPermutation> weyl_group(Rank n) {
  std::vector<SignedPermutation> out;
  out.reserve(static_cast<std::size_t>(n.weyl_order()));
  for_each_weyl_element(n, [&](const SignedPermutation& w) { out.push_back(w); });
  return out;
}

/// Largest a-coordinate with nonzero multiplicity in the N-th power.
inline int support_bound(Rank n, int power) noexcept { return power + 2 * n.value() - 1; }

namespace detail {

/// Recursive descending-lex walk over chamber points with per-coordinate bounds.
/// Coordinates must satisfy lo_i <= a_i <= hi_i and carry the given parity.
template <class Fn>
void enumerate_chamber(std::span<const int> lo, std::span<const int> hi, int parity,
                       std::vector<int>& a, std::size_t k, Fn& fn) {
  const std::size_t n = lo.size();
  if (k == n) {
    fn(std::span<const int>(a));
    return;
  }
  // smallest admissible value at slot k leaves room for the remaining coordinates
  const int floor_k = (parity == 1 ? 1 : 2) + 2 * static_cast<int>(n - 1 - k);
  int top = hi[k];
  if (k > 0) top = std::min(top, a[k - 1] - 2);
  if (mod2(top) != parity) --top;
  const int bottom = std::max(lo[k], floor_k);
  for (int v = top; v >= bottom; v -= 2) {
    a[k] = v;
    enumerate_chamber(lo, hi, parity, a, k + 1, fn);
  }
}

}  // namespace detail

/// Visits canonical points of parity N+1 inside [lo_i, hi_i] per axis, descending lexicographic.
template <class Fn>
void for_each_support_point(Rank n, int power, std::span<const int> lo, std::span<const int> hi,
                            Fn&& fn) {
  if (power < 0) throw DomainError("tensor power must be >= 0");
  std::vector<int> clipped_hi(hi.begin(), hi.end());
  for (int& h : clipped_hi) h = std::min(h, support_bound(n, power));
  std::vector<int> a(n.size());
  detail::enumerate_chamber(lo, std::span<const int>(clipped_hi), support_parity(power), a, 0, fn);
}

template <class Fn>
void for_each_support_point(Rank n, int power, Fn&& fn) {
  std::vector<int> lo(n.size(), 0);
  std::vector<int> hi(n.size(), support_bound(n, power));
  for_each_support_point(n, power, lo, hi, std::forward<Fn>(fn));
}

/// Canonical points with a_i = N+1 (mod 2) and a_1 <= N + 2n - 1, descending lexicographic.
inline std::vector<APoint> enumerate_support(Rank n, int power) {
  std::vector<APoint> out;
  for_each_support_point(n, power, [&](std::span<const int> a) {
    out.emplace_back(std::vector<int>(a.begin(), a.end()));
  });
  return out;
}

/// Number of support points, C(K, n) where K counts admissible values of one coordinate.
inline double support_size(Rank n, int power) {
  // the bound itself always carries the support parity
  const int top = support_bound(n, power);
  const int count = support_parity(power) == 1 ? (top + 1) / 2 : top / 2;
  double c = 1;
  for (int i = 0; i < n.value(); ++i) c = c * (count - i) / (i + 1);
  return std::max(c, 0.0);
}

}  // namespace bspin
