// Copyright 2026 The pcid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pcid/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>

namespace pcid {
namespace {

std::vector<double> SimpsonWeights(std::size_t panels) {
  if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("Simpson needs an even panel count");
  const double h = 1.0 / static_cast<double>(panels);
  std::vector<double> w(panels + 1);
  for (std::size_t k = 0; k <= panels; ++k) {
    const double c = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    w[k] = c * h / 3.0;
  }
  return w;
}

double QuarticAroundHalf(const std::array<double, 5>& raw) {
  // int (x - mu)^2 (x - 1/2)^2 = E[(x^2 + a x + c)^2], a = -(mu + 1/2), c = mu / 2.
  const double mu = raw[1] / raw[0];
  const double a = -(mu + 0.5);
  const double c = mu / 2.0;
  return raw[4] + 2.0 * a * raw[3] + (a * a + 2.0 * c) * raw[2] + 2.0 * a * c * raw[1] +
         c * c * raw[0];
}

double VarianceOf(const std::array<double, 5>& raw) {
  const double mu = raw[1] / raw[0];
  return std::max(0.0, raw[2] / raw[0] - mu * mu);
}

std::array<double, 5> RawMoments(const MixtureDistribution& m) {
  std::array<double, 5> raw{};
  for (int k = 0; k <= 4; ++k) raw[k] = m.RawMoment(k);
  return raw;
}

}  // namespace

CorrelationOracle corr_uniform_step2(bool coupled, std::size_t panels) {
  // Given the first draws (x, y), the step-2 predictive of coordinate 1 is
  // A delta_x + (1 - A) U(0,1) with A = y (coupled) and symmetrically for
  // coordinate 2; the step-2 draws are conditionally independent.
  const std::vector<double> w = SimpsonWeights(panels);
  const double h = 1.0 / static_cast<double>(panels);
  double e_m1m2 = 0.0, e_m1 = 0.0, e_second = 0.0;
  for (std::size_t a = 0; a <= panels; ++a) {
    const double x = static_cast<double>(a) * h;
    for (std::size_t b = 0; b <= panels; ++b) {
      const double y = static_cast<double>(b) * h;
      const double a1 = coupled ? y : 0.0;
      const double a2 = coupled ? x : 0.0;
      const double m1 = a1 * x + (1.0 - a1) * 0.5;
      const double m2 = a2 * y + (1.0 - a2) * 0.5;
      const double s1 = a1 * x * x + (1.0 - a1) / 3.0;
      const double wt = w[a] * w[b];
      e_m1m2 += wt * m1 * m2;
      e_m1 += wt * m1;
      e_second += wt * s1;
    }
  }
  const double covariance = e_m1m2 - e_m1 * e_m1;
  const double variance = e_second - e_m1 * e_m1;
  return {covariance, covariance / variance};
}

double gamma_partial_product(std::size_t n) {
  double prod = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double dk = static_cast<double>(k);
    prod *= 1.0 - 2.0 / ((dk + 1.0) * (dk + 2.0));
  }
  return prod;
}

double gamma_partial_product_closed(std::size_t n) {
  const double dn = static_cast<double>(n);
  return (dn + 3.0) / (3.0 * (dn + 1.0));
}

double gamma_mean_limit() { return 1.0 / 3.0; }

double gamma_partial_variance(std::size_t n) {
  double second = 1.0, first = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double dk = static_cast<double>(k);
    const double m2 = 2.0 / ((dk + 1.0) * (dk + 2.0));
    const double m4 = 24.0 / ((dk + 1.0) * (dk + 2.0) * (dk + 3.0) * (dk + 4.0));
    second *= 1.0 - 2.0 * m2 + m4;
    first *= 1.0 - m2;
  }
  return second - first * first;
}

double gamma_variance_lower_bound() {
  // prod_{k=2}^{n} = gamma_partial_product(n) / (2/3) -> (1/3) / (2/3) = 1/2.
  const double tail = gamma_mean_limit() / gamma_partial_product(1);
  return 4.0 / 45.0 * tail * tail;
}

WeightMoments weight_moments(const WeightDistribution& w) {
  WeightMoments m;
  if (const auto* d = std::get_if<DegenerateWeight>(&w.repr())) {
    m.mean = d->value;
    m.variance = 0.0;
    m.inv_square_moment = 1.0 / (d->value * d->value);
  } else if (const auto* t = std::get_if<TwoPointWeight>(&w.repr())) {
    const double p = t->p_low, q = 1.0 - t->p_low;
    m.mean = p * t->low + q * t->high;
    m.variance = p * q * (t->high - t->low) * (t->high - t->low);
    m.inv_square_moment = p / (t->low * t->low) + q / (t->high * t->high);
  } else if (const auto* u = std::get_if<UniformWeight>(&w.repr())) {
    const double width = u->upper - u->lower;
    m.mean = 0.5 * (u->lower + u->upper);
    m.variance = width * width / 12.0;
    m.inv_square_moment = (1.0 / u->lower - 1.0 / u->upper) / width;
  } else {
    const auto& g = std::get<ShiftedGammaWeight>(w.repr());
    m.mean = g.shift + g.shape * g.scale;
    m.variance = g.shape * g.scale * g.scale;
    const boost::math::gamma_distribution<double> law(g.shape, g.scale);
    boost::math::quadrature::exp_sinh<double> integrator;
    m.inv_square_moment = integrator.integrate([&](double y) {
      if (y <= 0.0) return 0.0;
      const double s = g.shift + y;
      return boost::math::pdf(law, y) / (s * s);
    });
  }
  m.second_moment = m.variance + m.mean * m.mean;
  return m;
}

double rru_clt_variance(const WeightMoments& moments, double sigma2_alpha) {
  if (!std::isfinite(moments.inv_square_moment) || !(moments.mean > 0.0)) {
    throw std::domain_error("rru_clt_variance: E[1/W^2] must be finite and E[W] > 0");
  }
  return sigma2_alpha * moments.variance / (moments.mean * moments.mean);
}

PolyaLimitMoments polya_limit_moments(double w0, const BaseMeasure& nu, double a, double b) {
  if (!(w0 > 0.0)) throw std::invalid_argument("polya_limit_moments: w0 must be > 0");
  if (!(a < b)) throw std::invalid_argument("polya_limit_moments: need a < b");
  const double p = nu.Cdf(b) - nu.Cdf(a);
  if (p <= 0.0 || p >= 1.0) return {std::clamp(p, 0.0, 1.0), 0.0, true};
  return {p, p * (1.0 - p) / (w0 + 1.0), false};
}

Matrix2 tilde_sigma_uniform(const std::array<double, 5>& raw1, const std::array<double, 5>& raw2) {
  const double off = 4.0 * VarianceOf(raw1) * VarianceOf(raw2);
  return {{{4.0 * QuarticAroundHalf(raw1), off}, {off, 4.0 * QuarticAroundHalf(raw2)}}};
}

Matrix2 tilde_sigma_uniform(const MixtureDistribution& alpha1, const MixtureDistribution& alpha2) {
  return tilde_sigma_uniform(RawMoments(alpha1), RawMoments(alpha2));
}

std::array<double, 2> tilde_sigma_uniform_cross_diagonal(const std::array<double, 5>& raw1,
                                                         const std::array<double, 5>& raw2) {
  auto spread_around_half = [](const std::array<double, 5>& raw) {
    return raw[2] - raw[1] + 0.25 * raw[0];
  };
  return {4.0 * VarianceOf(raw1) * spread_around_half(raw2),
          4.0 * VarianceOf(raw2) * spread_around_half(raw1)};
}

}  // namespace pcid
