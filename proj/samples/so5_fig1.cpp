// Prints the scaled pmf next to the limit density for so(5) and N = 15,
// i.e. the data behind the usual "dots against surface" picture.

#include <cmath>
#include <cstdio>

#include <bspin/asymptotics.hpp>
#include <bspin/convergence.hpp>
#include <bspin/exact.hpp>

int main() {
  const bspin::Rank n(2);
  const int power = 15;
  const bspin::LimitDensity phi(n);
  const double scale = std::pow(std::sqrt(power) / 2.0, n.value());
  std::printf("%4s %4s %10s %10s %12s %12s\n", "a1", "a2", "x1", "x2", "scaled pmf", "phi");
  for (const auto& row : bspin::decomposition_table(n, power).rows) {
    const auto x = bspin::rescale(row.a.coords(), power);
    std::printf("%4d %4d %10.5f %10.5f %12.6f %12.6f\n", row.a[0], row.a[1], x[0], x[1],
                bspin::to_double(row.probability) * scale, phi(x));
  }
}
