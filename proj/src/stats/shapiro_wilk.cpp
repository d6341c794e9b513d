#include "wattbench/stats/shapiro_wilk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "wattbench/common/error.hpp"
#include "wattbench/stats/distributions.hpp"

namespace wattbench::stats {

namespace {

// AS R94 polynomial coefficients.
constexpr std::array<double, 2> kGamma = {-2.273, 0.459};
constexpr std::array<double, 6> kC1 = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr std::array<double, 6> kC2 = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr std::array<double, 4> kC3 = {0.544, -0.39978, 0.025054, -6.714e-4};
constexpr std::array<double, 4> kC4 = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr std::array<double, 4> kC5 = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr std::array<double, 3> kC6 = {-0.4803, -0.082676, 0.0030302};

// c[0] + c[1] x + ... evaluated in the same order as the reference routine.
template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double result = c[0];
  if constexpr (N > 1) {
    double p = x * c[N - 1];
    for (std::size_t k = N - 2; k > 0; --k) p = (p + c[k]) * x;
    result += p;
  }
  return result;
}

// Half-vector of coefficients a[1..n/2] (index 0 unused), antisymmetric
// about the centre of the ordered sample.
std::vector<double> coefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half + 1, 0.0);
  const double an = static_cast<double>(n);
  if (n == 3) {
    a[1] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  const double an25 = an + 0.25;
  double summ2 = 0.0;
  for (std::size_t i = 1; i <= half; ++i) {
    a[i] = normal_quantile((static_cast<double>(i) - 0.375) / an25);
    summ2 += a[i] * a[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(kC1, rsn) - a[1] / ssumm2;

  std::size_t first_scaled;
  double fac;
  if (n > 5) {
    first_scaled = 3;
    const double a2 = -a[2] / ssumm2 + poly(kC2, rsn);
    fac = std::sqrt((summ2 - 2.0 * a[1] * a[1] - 2.0 * a[2] * a[2]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[2] = a2;
  } else {
    first_scaled = 2;
    fac = std::sqrt((summ2 - 2.0 * a[1] * a[1]) / (1.0 - 2.0 * a1 * a1));
  }
  a[1] = a1;
  for (std::size_t i = first_scaled; i <= half; ++i) a[i] /= -fac;
  return a;
}

} // namespace

NormalityResult shapiro_wilk(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3 || n > 5000) {
    throw InvalidArgument("shapiro_wilk: sample size must be in [3, 5000], got " + std::to_string(n));
  }
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) throw InvalidArgument("shapiro_wilk: sample has zero variance");

  const auto a = coefficients(n);

  // W as the squared correlation between the scaled order statistics and
  // the full antisymmetric coefficient vector.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    if (i < j) {
      coef[i] = -a[1 + i];
    } else if (i > j) {
      coef[i] = a[1 + j];
    }
  }
  double coef_sum = 0.0;
  double x_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    coef_sum += coef[i];
    x_sum += x[i] / range;
  }
  const double coef_mean = coef_sum / static_cast<double>(n);
  const double x_mean = x_sum / static_cast<double>(n);
  double ssa = 0.0, ssx = 0.0, sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = coef[i] - coef_mean;
    const double dx = x[i] / range - x_mean;
    ssa += da * da;
    ssx += dx * dx;
    sax += da * dx;
  }
  // 1 - W computed directly to keep precision when W is close to 1.
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

  NormalityResult result;
  result.n = n;
  result.w_statistic = 1.0 - w1;

  if (n == 3) {
    constexpr double six_over_pi = 6.0 / std::numbers::pi;
    constexpr double asin_sqrt_three_quarters = std::numbers::pi / 3.0;
    const double w = std::min(result.w_statistic, 1.0);
    result.p_value = std::clamp(six_over_pi * (std::asin(std::sqrt(w)) - asin_sqrt_three_quarters), 0.0, 1.0);
    return result;
  }

  if (!(w1 > 0.0)) {
    result.w_statistic = 1.0;
    result.p_value = 1.0;
    return result;
  }

  const double an = static_cast<double>(n);
  double y = std::log(w1);
  double m, s;
  if (n <= 11) {
    const double gamma = poly(kGamma, an);
    if (y >= gamma) {
      result.p_value = 1e-99;
      return result;
    }
    y = -std::log(gamma - y);
    m = poly(kC3, an);
    s = std::exp(poly(kC4, an));
  } else {
    const double log_n = std::log(an);
    m = poly(kC5, log_n);
    s = std::exp(poly(kC6, log_n));
  }
  result.p_value = normal_sf((y - m) / s);
  return result;
}

} // namespace wattbench::stats
