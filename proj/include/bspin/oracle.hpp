#pragma once

/**
 * @file oracle.hpp
 * @brief Multiplicities computed without the closed form.
 *
 * Two routes, independent of each other and of exact.hpp's formula:
 *
 *  - reflected walks: the spinor weights are (+-1/2, ..., +-1/2), so the
 *    number of N-step walks reaching doubled e-coordinate c is the product of
 *    binomials prod_i C(N, (N + c_i)/2). Alternating this count over the
 *    Weyl group gives the multiplicity at a dominant point.
 *  - recurrence: multiply the field of the previous power by the weight
 *    diagram of the spinor (all +-1 shifts of the a-coordinates) and keep
 *    only points strictly inside the shifted chamber.
 */

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exact.hpp"
#include "lattice.hpp"

namespace bspin {

/// Unconstrained walk count K_N(c) for doubled e-coordinates c.
inline BigInt walk_count(Rank n, int power, std::span<const int> c) {
  require_power(power);
  require_rank_length(n, c);
  BigInt k = 1;
  for (int v : c) {
    if (std::abs(v) > power || mod2(power + v) != 0) return 0;
    k *= binomial(power, (power + v) / 2);
  }
  return k;
}

/// sum_w eps(w) K_N(w a - rho) over the given Weyl group elements.
inline BigInt multiplicity_reflected(Rank n, int power, std::span<const int> a,
                                     std::span<const SignedPermutation> group) {
  require_power(power);
  require_rank_length(n, a);
  require_power_parity(a, power);
  const auto rho = doubled_rho(n);
  BigInt m = 0;
  for (const auto& w : group) {
    auto c = w.apply(a);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= rho[i];
    const BigInt k = walk_count(n, power, c);
    if (w.sign > 0) m += k;
    else m -= k;
  }
  return m;
}

inline BigInt multiplicity_reflected(Rank n, int power, std::span<const int> a) {
  return multiplicity_reflected(n, power, a, weyl_group(n));
}

/// Sparse multiplicity field keyed by a-coordinates; only chamber points are stored.
struct MultiplicityField {
  int power = 0;
  std::map<std::vector<int>, BigInt> values;

  BigInt at(std::span<const int> a) const {
    auto it = values.find(std::vector<int>(a.begin(), a.end()));
    return it == values.end() ? BigInt(0) : it->second;
  }
};

/// Tensoring with the spinor one factor at a time.
class MultiplicityRecurrence {
 public:
  explicit MultiplicityRecurrence(Rank n) : n_(n) {
    field_.values.emplace(doubled_rho(n), BigInt(1));
  }

  Rank rank() const noexcept { return n_; }
  const MultiplicityField& field() const noexcept { return field_; }

  void step() {
    const int r = n_.value();
    const unsigned masks = 1u << r;
    MultiplicityField next;
    next.power = field_.power + 1;
    std::vector<int> q(n_.size());
    for (const auto& [p, v] : field_.values) {
      for (unsigned mask = 0; mask < masks; ++mask) {
        for (int i = 0; i < r; ++i) q[i] = p[i] + ((mask >> i) & 1u ? -1 : 1);
        // points on a wall carry zero; the chamber is closed under these steps otherwise
        if (!is_dominant_regular(q)) continue;
        next.values[q] += v;
      }
    }
    field_ = std::move(next);
  }

 private:
  Rank n_;
  MultiplicityField field_;
};

inline MultiplicityField multiplicity_recurrence(Rank n, int power) {
  require_power(power);
  MultiplicityRecurrence rec(n);
  for (int k = 0; k < power; ++k) rec.step();
  return rec.field();
}

struct Divergence {
  std::vector<int> a;
  BigInt closed;
  BigInt reflected;
  BigInt recurrence;
};

struct EquivalenceReport {
  bool pass = true;
  std::size_t points_checked = 0;
  std::optional<Divergence> first_divergence;
};

/// Compares a closed-form evaluator against both oracles on every support point.
/// Recurrence entries outside the support also count as a divergence.
template <class ClosedFn>
EquivalenceReport check_equivalence(Rank n, int power, ClosedFn&& closed) {
  EquivalenceReport report;
  const auto group = weyl_group(n);
  const auto field = multiplicity_recurrence(n, power);
  std::size_t matched_field_points = 0;
  for_each_support_point(n, power, [&](std::span<const int> a) {
    ++report.points_checked;
    if (!report.pass) return;
    const BigInt c = closed(a);
    const BigInt w = multiplicity_reflected(n, power, a, group);
    const BigInt r = field.at(a);
    if (r != 0) ++matched_field_points;
    if (c != w || c != r) {
      report.pass = false;
      report.first_divergence = Divergence{std::vector<int>(a.begin(), a.end()), c, w, r};
    }
  });
  if (report.pass && matched_field_points != field.values.size()) {
    for (const auto& [p, v] : field.values) {
      if (!has_power_parity(p, power) || p.front() > support_bound(n, power)) {
        report.pass = false;
        report.first_divergence = Divergence{p, 0, 0, v};
        break;
      }
    }
  }
  return report;
}

inline EquivalenceReport check_equivalence(Rank n, int power) {
  ClosedFormMultiplicity closed(n, power);
  return check_equivalence(n, power, [&](std::span<const int> a) { return closed(a); });
}

}  // namespace bspin
