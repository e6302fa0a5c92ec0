// Independent reference implementations used only by the test suite.
// These deliberately avoid the algorithms used by the library (bisection
// instead of safeguarded Newton, Taylor-series matrix exponential instead
// of eigenprojectors, Simpson sums instead of adaptive Gauss-Kronrod) so
// that agreement is evidence of correctness rather than shared bugs.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <tpdl/closure.hpp>
#include <tpdl/spectral.hpp>

namespace oracle {

// Root of P+(rho) - P-(R- * rho / (rho - R+)) - f(R-) = 0 by pure bisection.
inline double bisect_rho_plus(double r_plus, double r_minus,
                              const tpdl::RawParams& p) {
  auto phi = [&](double rho) {
    const double rho_minus = r_minus * rho / (rho - r_plus);
    return p.pressure_plus(rho) - p.pressure_minus(rho_minus) - p.f(r_minus);
  };
  double lo = r_plus * (1.0 + 1e-14);
  double hi = r_plus + r_minus + 1.0;
  while (phi(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e18) throw std::runtime_error("bisect_rho_plus: no bracket");
  }
  // phi -> -inf as rho -> r_plus+ because the minus-phase density blows up.
  while (phi(lo) > 0.0) {
    lo = r_plus + (lo - r_plus) * 0.5;
    if (lo - r_plus < 1e-300)
      throw std::runtime_error("bisect_rho_plus: no lower bracket");
  }
  for (int i = 0; i < 220; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Matrix exponential by scaling-and-squaring with a plain Taylor series.
inline tpdl::Mat4 expm_taylor(const tpdl::Mat4& a, double t) {
  tpdl::Mat4 m = t * a;
  double norm = 0.0;
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += std::abs(m(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.25 && squarings < 60) {
    m *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  tpdl::Mat4 sum = tpdl::Mat4::Identity();
  tpdl::Mat4 term = tpdl::Mat4::Identity();
  for (int k = 1; k < 40; ++k) {
    term = (term * m) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Least-squares slope of log(v) against log(t), with standard error.
struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
};

inline SlopeFit log_log_slope(const std::vector<double>& t,
                              const std::vector<double>& v) {
  const std::size_t n = t.size();
  if (n < 3 || v.size() != n)
    throw std::runtime_error("log_log_slope: need >= 3 points");
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::log(t[i]);
    ys[i] = std::log(v[i]);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - my - slope * (xs[i] - mx);
    ss_res += r * r;
  }
  SlopeFit out;
  out.slope = slope;
  out.stderr_slope = n > 2 ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;
  return out;
}

// Deterministic uniform(0,1) stream for building randomized test cases.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  double next() {
    // splitmix64 step; top 53 bits to double.
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  double range(double lo, double hi) { return lo + (hi - lo) * next(); }
  double log_range(double lo, double hi) {
    return lo * std::exp(next() * std::log(hi / lo));
  }

 private:
  std::uint64_t state_;
};

}  // namespace oracle
