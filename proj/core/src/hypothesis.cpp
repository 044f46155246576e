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

#include "pcid/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

namespace pcid {
namespace {

constexpr Eigen::Index kRowBlock = 256;

double StephensScale(double effective_n) {
  const double root = std::sqrt(effective_n);
  return root + 0.12 + 0.11 / root;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form converges fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double kolmogorov_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("kolmogorov_quantile: alpha must lie in (0, 1)");
  }
  double lo = 0.0, hi = 10.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_survival(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double t = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == t) ++i;
    while (j < sb.size() && sb[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, kolmogorov_survival(StephensScale(ne) * d)};
}

TestResult ks_one_sample(std::span<const double> sample,
                         const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double f = cdf(s[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  return {d, kolmogorov_survival(StephensScale(n) * d)};
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  return kolmogorov_quantile(alpha) / StephensScale(dn * dm / (dn + dm));
}

TestResult energy_test(std::span<const double> a, std::span<const double> b, std::size_t dim,
                       std::size_t permutations, RngStream& rng) {
  if (dim == 0 || a.size() % dim != 0 || b.size() % dim != 0 || a.empty() || b.empty()) {
    throw std::invalid_argument("energy_test: samples must be non-empty n x dim matrices");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(a.size() / dim);
  const Eigen::Index m = static_cast<Eigen::Index>(b.size() / dim);
  const Eigen::Index total = n + m;
  const Eigen::Index d = static_cast<Eigen::Index>(dim);

  Eigen::MatrixXd z(total, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) z(r, c) = a[static_cast<std::size_t>(r * d + c)];
  }
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) z(n + r, c) = b[static_cast<std::size_t>(r * d + c)];
  }
  for (Eigen::Index c = 0; c < d; ++c) {
    const double mean = z.col(c).mean();
    const double sd = std::sqrt((z.col(c).array() - mean).square().sum() /
                                static_cast<double>(total - 1));
    if (sd > 0.0) z.col(c) = (z.col(c).array() - mean) / sd;
  }
  // Row-major copy for the distance loops.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> zr = z;

  // Column 0 is the observed labelling; the rest are permutations.
  const Eigen::Index cols = static_cast<Eigen::Index>(permutations) + 1;
  Eigen::MatrixXd labels = Eigen::MatrixXd::Zero(total, cols);
  labels.col(0).head(n).setOnes();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
  for (Eigen::Index p = 1; p < cols; ++p) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (std::size_t k = order.size() - 1; k > 0; --k) {
      std::swap(order[k], order[rng.Below(k + 1)]);
    }
    for (Eigen::Index k = 0; k < n; ++k) labels(order[static_cast<std::size_t>(k)], p) = 1.0;
  }

  Eigen::VectorXd within_a = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd row_dot = Eigen::VectorXd::Zero(cols);
  double grand = 0.0;
  Eigen::MatrixXd block(kRowBlock, total);
  for (Eigen::Index start = 0; start < total; start += kRowBlock) {
    const Eigen::Index rows = std::min(kRowBlock, total - start);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double* zi = zr.row(start + r).data();
      for (Eigen::Index s = 0; s < total; ++s) {
        const double* zs = zr.row(s).data();
        double acc = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) {
          const double diff = zi[c] - zs[c];
          acc += diff * diff;
        }
        block(r, s) = std::sqrt(acc);
      }
    }
    const auto top = block.topRows(rows);
    const Eigen::VectorXd row_sums = top.rowwise().sum();
    const Eigen::MatrixXd product = top * labels;
    const auto lab = labels.middleRows(start, rows);
    within_a += (lab.array() * product.array()).colwise().sum().matrix().transpose();
    row_dot += lab.transpose() * row_sums;
    grand += row_sums.sum();
  }

  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  auto statistic = [&](Eigen::Index p) {
    const double wa = within_a(p);
    const double wb = grand - 2.0 * row_dot(p) + wa;
    const double cross = row_dot(p) - wa;
    return dn * dm / (dn + dm) * (2.0 * cross / (dn * dm) - wa / (dn * dn) - wb / (dm * dm));
  };
  const double observed = statistic(0);
  std::size_t exceed = 0;
  for (Eigen::Index p = 1; p < cols; ++p) {
    if (statistic(p) >= observed - 1e-12 * std::abs(observed)) ++exceed;
  }
  return {observed, (1.0 + static_cast<double>(exceed)) / (1.0 + static_cast<double>(permutations))};
}

}  // namespace pcid
