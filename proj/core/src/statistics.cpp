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

#include "pcid/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "pcid/errors.hpp"

namespace pcid {
namespace {

constexpr double kIdentityTolerance = 1e-9;
constexpr std::size_t kGridPoints = 512;
constexpr std::size_t kDeciles = 10;

void RequirePredictive(const PathRecord& path) {
  const std::size_t k = path.coordinates;
  if (path.x.size() != path.horizon * k) {
    throw std::invalid_argument("path record has no observations");
  }
  if (path.pred_mean.size() != (path.horizon + 1) * k) {
    throw std::invalid_argument("path record has no predictive summaries");
  }
}

void CheckClose(double a, double b, double scale, const char* what) {
  if (std::abs(a - b) > kIdentityTolerance * std::max({1.0, std::abs(a), std::abs(b), scale})) {
    throw IdentityViolation(std::string(what) + ": " + std::to_string(a) +
                            " != " + std::to_string(b));
  }
}

}  // namespace

std::vector<double> forecast_errors(const PathRecord& path) {
  RequirePredictive(path);
  std::vector<double> u(path.horizon * path.coordinates);
  for (std::size_t n = 1; n <= path.horizon; ++n) {
    for (std::size_t i = 0; i < path.coordinates; ++i) {
      u[(n - 1) * path.coordinates + i] = path.X(n, i) - path.PredMean(n, i);
    }
  }
  return u;
}

std::vector<double> prediction_increments(const PathRecord& path) {
  RequirePredictive(path);
  std::vector<double> de(path.horizon * path.coordinates);
  for (std::size_t n = 1; n <= path.horizon; ++n) {
    for (std::size_t i = 0; i < path.coordinates; ++i) {
      de[(n - 1) * path.coordinates + i] = path.PredMean(n + 1, i) - path.PredMean(n, i);
    }
  }
  return de;
}

DerivedSeries scaled_sums(const PathRecord& path) {
  RequirePredictive(path);
  const std::size_t k = path.coordinates;
  DerivedSeries out;
  out.coordinates = k;
  out.horizon = path.horizon;
  out.U = forecast_errors(path);
  out.dE = prediction_increments(path);
  const std::size_t size = path.horizon * k;
  out.V.resize(size);
  out.Xbar.resize(size);
  out.S.resize(size);
  out.Stilde.resize(size);
  for (std::size_t i = 0; i < k; ++i) {
    double sum_x = 0.0, sum_u = 0.0, sum_v = 0.0, sum_abs_v = 0.0, sum_mean = 0.0;
    for (std::size_t n = 1; n <= path.horizon; ++n) {
      const std::size_t idx = (n - 1) * k + i;
      const double dn = static_cast<double>(n);
      const double root = std::sqrt(dn);
      out.V[idx] = out.U[idx] - dn * out.dE[idx];
      sum_x += path.X(n, i);
      sum_u += out.U[idx];
      sum_v += out.V[idx];
      sum_abs_v += std::abs(out.V[idx]);
      sum_mean += path.PredMean(n, i);
      out.Xbar[idx] = sum_x / dn;
      out.S[idx] = sum_u / root;
      out.Stilde[idx] = root * (out.Xbar[idx] - path.PredMean(n + 1, i));
      CheckClose(out.Stilde[idx], sum_v / root, sum_abs_v / root, "Stilde telescoping");
      CheckClose(sum_u, sum_x - sum_mean, std::abs(sum_x) + std::abs(sum_mean),
                 "forecast-error telescoping");
    }
  }
  return out;
}

void ScaledSumAccumulator::Add(double x, double mean_before, double mean_after) {
  ++n_;
  const double dn = static_cast<double>(n_);
  const double u = x - mean_before;
  sum_x_ += x;
  const double v = u - dn * (mean_after - mean_before);
  sum_u_ += u;
  sum_v_ += v;
  sum_u2_ += u * u;
  sum_v2_ += v * v;
  last_mean_ = mean_after;
}

double ScaledSumAccumulator::S() const {
  return n_ == 0 ? 0.0 : sum_u_ / std::sqrt(static_cast<double>(n_));
}

double ScaledSumAccumulator::Stilde() const {
  if (n_ == 0) return 0.0;
  const double dn = static_cast<double>(n_);
  return std::sqrt(dn) * (sum_x_ / dn - last_mean_);
}

double ScaledSumAccumulator::StildeFromV() const {
  return n_ == 0 ? 0.0 : sum_v_ / std::sqrt(static_cast<double>(n_));
}

double ScaledSumAccumulator::MeanSquareU() const {
  return n_ == 0 ? 0.0 : sum_u2_ / static_cast<double>(n_);
}

double ScaledSumAccumulator::MeanSquareV() const {
  return n_ == 0 ? 0.0 : sum_v2_ / static_cast<double>(n_);
}

std::string_view to_string(SllnFunctional f) {
  switch (f) {
    case SllnFunctional::kProductOfCoords: return "product_of_coords";
    case SllnFunctional::kLogSumOfCoords: return "log_sum_of_coords";
    case SllnFunctional::kIdentity: return "identity";
  }
  return "unknown";
}

std::vector<double> slln_functionals(const PathRecord& path, SllnFunctional functional) {
  const std::size_t k = path.coordinates;
  if (path.x.size() != path.horizon * k) {
    throw std::invalid_argument("path record has no observations");
  }
  std::vector<double> out(path.horizon);
  double acc = 0.0;
  for (std::size_t n = 1; n <= path.horizon; ++n) {
    double f = 0.0;
    switch (functional) {
      case SllnFunctional::kProductOfCoords:
        f = 1.0;
        for (std::size_t i = 0; i < k; ++i) f *= path.X(n, i);
        break;
      case SllnFunctional::kLogSumOfCoords: {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
          if (!(path.X(n, i) > 0.0)) {
            throw std::domain_error("log_sum_of_coords needs positive observations");
          }
          s += path.X(n, i);
        }
        f = std::log(s);
        break;
      }
      case SllnFunctional::kIdentity: f = path.X(n, 0); break;
    }
    acc += f;
    out[n - 1] = acc / static_cast<double>(n);
  }
  return out;
}

double kolmogorov_distance(std::span<const double> sample, const MixtureDistribution& predictive) {
  if (sample.empty()) throw std::invalid_argument("kolmogorov_distance: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  std::vector<double> points(sorted);
  for (const Atom& a : predictive.atoms()) points.push_back(a.value);
  for (double j : predictive.base().Jumps()) points.push_back(j);
  auto [lo, hi] = predictive.base().SupportBounds();
  lo = std::min(lo, sorted.front());
  hi = std::max(hi, sorted.back());
  for (std::size_t g = 0; g < kGridPoints; ++g) {
    points.push_back(lo + (hi - lo) * static_cast<double>(g) / (kGridPoints - 1));
  }

  double sup = 0.0;
  for (double t : points) {
    const auto upper = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    const auto lower = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    sup = std::max(sup, std::abs(static_cast<double>(upper) / n - predictive.Cdf(t)));
    sup = std::max(sup, std::abs(static_cast<double>(lower) / n - predictive.CdfLeft(t)));
  }
  return sup;
}

double joint_rectangle_distance(std::span<const double> rows, std::size_t coordinates,
                                const std::vector<MixtureDistribution>& marginals) {
  if (coordinates < 2) return 0.0;
  if (marginals.size() != coordinates || rows.size() % coordinates != 0 || rows.empty()) {
    throw std::invalid_argument("joint_rectangle_distance: shape mismatch");
  }
  const std::size_t n = rows.size() / coordinates;
  // Decile cut points and bin index of every observation, per coordinate.
  std::vector<std::array<double, kDeciles>> cuts(coordinates);
  std::vector<std::vector<std::size_t>> bins(coordinates, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < coordinates; ++i) {
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = rows[r * coordinates + i];
    std::vector<double> sorted(col);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t a = 0; a < kDeciles; ++a) {
      const std::size_t rank = ((a + 1) * n + kDeciles - 1) / kDeciles;
      cuts[i][a] = sorted[std::max<std::size_t>(rank, 1) - 1];
    }
    for (std::size_t r = 0; r < n; ++r) {
      bins[i][r] = static_cast<std::size_t>(
          std::lower_bound(cuts[i].begin(), cuts[i].end(), col[r]) - cuts[i].begin());
    }
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < coordinates; ++i) {
    for (std::size_t j = i + 1; j < coordinates; ++j) {
      std::array<std::array<double, kDeciles>, kDeciles> counts{};
      for (std::size_t r = 0; r < n; ++r) counts[bins[i][r]][bins[j][r]] += 1.0;
      for (std::size_t a = 0; a < kDeciles; ++a) {
        for (std::size_t b = 0; b < kDeciles; ++b) {
          if (a > 0) counts[a][b] += counts[a - 1][b];
        }
      }
      for (std::size_t a = 0; a < kDeciles; ++a) {
        for (std::size_t b = 1; b < kDeciles; ++b) counts[a][b] += counts[a][b - 1];
      }
      for (std::size_t a = 0; a < kDeciles; ++a) {
        const double fi = marginals[i].Cdf(cuts[i][a]);
        for (std::size_t b = 0; b < kDeciles; ++b) {
          const double fj = marginals[j].Cdf(cuts[j][b]);
          sup = std::max(sup, std::abs(counts[a][b] / static_cast<double>(n) - fi * fj));
        }
      }
    }
  }
  return sup;
}

MixtureDistribution predictive_at(const ProcessSpec& spec, const PathRecord& path, std::size_t n,
                                  std::size_t i) {
  const std::size_t k = path.coordinates;
  if (n > path.horizon || i >= k) throw std::out_of_range("predictive_at: step out of range");
  switch (spec.kind) {
    case ProcessKind::kPolya:
    case ProcessKind::kReinforced:
    case ProcessKind::kUniformCoupled: {
      if (path.weight.size() != path.horizon * k) {
        throw std::invalid_argument("predictive_at: weights were not recorded");
      }
      const auto& p = std::get<ReinforcedParams>(spec.params);
      ReinforcedCoordState state(p.base[i], p.base_weight[i]);
      for (std::size_t m = 1; m <= n; ++m) state.Reinforce(path.X(m, i), path.weight[(m - 1) * k + i]);
      return reinforced_predictive(state);
    }
    case ProcessKind::kIid: return MixtureDistribution(std::get<IidParams>(spec.params).base[i]);
    default: break;
  }
  if (path.pred_mean.size() != (path.horizon + 1) * k) {
    throw std::invalid_argument("predictive_at: predictive summaries were not recorded");
  }
  return MixtureDistribution(BaseMeasure::Normal(path.PredMean(n + 1, i), path.PredVar(n + 1, i)));
}

DistanceReport empirical_vs_predictive_distance(const ProcessSpec& spec, const PathRecord& path,
                                                std::size_t n) {
  const std::size_t k = path.coordinates;
  if (n < 1 || n > path.horizon) throw std::out_of_range("distance: n must lie in [1, horizon]");
  DistanceReport out;
  std::vector<MixtureDistribution> marginals;
  for (std::size_t i = 0; i < k; ++i) {
    marginals.push_back(predictive_at(spec, path, n, i));
    std::vector<double> col(n);
    for (std::size_t m = 1; m <= n; ++m) col[m - 1] = path.X(m, i);
    out.marginal.push_back(kolmogorov_distance(col, marginals.back()));
  }
  out.joint = joint_rectangle_distance(std::span<const double>(path.x.data(), n * k), k, marginals);
  return out;
}

double SampleSummary::StandardError() const {
  return n == 0 ? 0.0 : std::sqrt(variance / static_cast<double>(n));
}

SampleSummary summarize(std::span<const double> values) {
  SampleSummary s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.n - 1);
  }
  return s;
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("sample_covariance: need two equal samples of size >= 2");
  }
  const double ma = summarize(a).mean;
  const double mb = summarize(b).mean;
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - ma) * (b[k] - mb);
  return acc / static_cast<double>(a.size() - 1);
}

double sample_correlation(std::span<const double> a, std::span<const double> b) {
  const double va = summarize(a).variance;
  const double vb = summarize(b).variance;
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return sample_covariance(a, b) / std::sqrt(va * vb);
}

}  // namespace pcid
