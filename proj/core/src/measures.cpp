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

#include "pcid/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pcid {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double NormalCdf(double x, double mean, double variance) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

void RequireMomentOrder(int k) {
  if (k < 0 || k > 4) throw std::invalid_argument("moment order must be in [0, 4]");
}

}  // namespace

BaseMeasure BaseMeasure::Uniform(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw std::invalid_argument("uniform base measure requires finite lower < upper");
  }
  return BaseMeasure(UniformMeasure{lower, upper});
}

BaseMeasure BaseMeasure::Normal(double mean, double variance) {
  if (!std::isfinite(mean) || !(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("normal base measure requires finite mean and variance > 0");
  }
  return BaseMeasure(NormalMeasure{mean, variance});
}

BaseMeasure BaseMeasure::Discrete(std::vector<double> values,
                                  std::vector<double> probabilities) {
  if (values.empty() || values.size() != probabilities.size()) {
    throw std::invalid_argument("discrete base measure needs matching, non-empty lists");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || !(probabilities[k] >= 0.0)) {
      throw std::invalid_argument("discrete base measure: bad value or probability");
    }
    total += probabilities[k];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("discrete base measure probabilities must sum to 1");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  DiscreteMeasure merged;
  for (std::size_t idx : order) {
    const double p = probabilities[idx] / total;
    if (!merged.values.empty() && merged.values.back() == values[idx]) {
      merged.probabilities.back() += p;
    } else {
      merged.values.push_back(values[idx]);
      merged.probabilities.push_back(p);
    }
  }
  return BaseMeasure(std::move(merged));
}

double BaseMeasure::Sample(RngStream& rng) const {
  return std::visit(
      Overloaded{
          [&](const UniformMeasure& u) { return rng.Uniform(u.lower, u.upper); },
          [&](const NormalMeasure& n) { return rng.Normal(n.mean, std::sqrt(n.variance)); },
          [&](const DiscreteMeasure& d) {
            if (d.values.size() == 1) return d.values.front();
            const double u = rng.Uniform();
            double acc = 0.0;
            for (std::size_t k = 0; k + 1 < d.values.size(); ++k) {
              acc += d.probabilities[k];
              if (u < acc) return d.values[k];
            }
            return d.values.back();
          }},
      repr_);
}

double BaseMeasure::Variance() const {
  if (const auto* n = std::get_if<NormalMeasure>(&repr_)) return n->variance;
  if (const auto* u = std::get_if<UniformMeasure>(&repr_)) {
    const double width = u->upper - u->lower;
    return width * width / 12.0;
  }
  const auto& d = std::get<DiscreteMeasure>(repr_);
  const double mean = Mean();
  double var = 0.0;
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    var += d.probabilities[k] * (d.values[k] - mean) * (d.values[k] - mean);
  }
  return var;
}

double BaseMeasure::RawMoment(int k) const {
  RequireMomentOrder(k);
  return std::visit(
      Overloaded{[&](const UniformMeasure& u) {
                   const double a = u.lower, b = u.upper;
                   return (std::pow(b, k + 1) - std::pow(a, k + 1)) / ((k + 1) * (b - a));
                 },
                 [&](const NormalMeasure& n) {
                   const double m = n.mean, v = n.variance;
                   switch (k) {
                     case 0: return 1.0;
                     case 1: return m;
                     case 2: return m * m + v;
                     case 3: return m * m * m + 3.0 * m * v;
                     default: return m * m * m * m + 6.0 * m * m * v + 3.0 * v * v;
                   }
                 },
                 [&](const DiscreteMeasure& d) {
                   double acc = 0.0;
                   for (std::size_t j = 0; j < d.values.size(); ++j) {
                     acc += d.probabilities[j] * std::pow(d.values[j], k);
                   }
                   return acc;
                 }},
      repr_);
}

double BaseMeasure::Cdf(double x) const {
  return std::visit(
      Overloaded{[&](const UniformMeasure& u) {
                   return std::clamp((x - u.lower) / (u.upper - u.lower), 0.0, 1.0);
                 },
                 [&](const NormalMeasure& n) { return NormalCdf(x, n.mean, n.variance); },
                 [&](const DiscreteMeasure& d) {
                   double acc = 0.0;
                   for (std::size_t j = 0; j < d.values.size() && d.values[j] <= x; ++j) {
                     acc += d.probabilities[j];
                   }
                   return std::min(acc, 1.0);
                 }},
      repr_);
}

double BaseMeasure::CdfLeft(double x) const {
  if (IsContinuous()) return Cdf(x);
  const auto& d = std::get<DiscreteMeasure>(repr_);
  double acc = 0.0;
  for (std::size_t j = 0; j < d.values.size() && d.values[j] < x; ++j) {
    acc += d.probabilities[j];
  }
  return std::min(acc, 1.0);
}

std::pair<double, double> BaseMeasure::SupportBounds() const {
  return std::visit(
      Overloaded{[](const UniformMeasure& u) { return std::pair{u.lower, u.upper}; },
                 [](const NormalMeasure& n) {
                   const double half = 8.0 * std::sqrt(n.variance);
                   return std::pair{n.mean - half, n.mean + half};
                 },
                 [](const DiscreteMeasure& d) {
                   return std::pair{d.values.front(), d.values.back()};
                 }},
      repr_);
}

std::span<const double> BaseMeasure::Jumps() const {
  if (const auto* d = std::get_if<DiscreteMeasure>(&repr_)) return d->values;
  return {};
}

std::string BaseMeasure::Describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{[&](const UniformMeasure& u) {
                          out << "uniform(" << u.lower << ", " << u.upper << ")";
                        },
                        [&](const NormalMeasure& n) {
                          out << "normal(" << n.mean << ", " << n.variance << ")";
                        },
                        [&](const DiscreteMeasure& d) {
                          out << "discrete(" << d.values.size() << " points)";
                        }},
             repr_);
  return out.str();
}

WeightDistribution::WeightDistribution(Repr repr) : repr_(std::move(repr)) {
  std::visit(Overloaded{[](const DegenerateWeight& w) {
                          if (!(w.value > 0.0) || !std::isfinite(w.value)) {
                            throw std::invalid_argument("degenerate weight must be > 0");
                          }
                        },
                        [](const TwoPointWeight& w) {
                          if (!(w.low > 0.0) || !(w.high > 0.0) || !(w.p_low >= 0.0) ||
                              !(w.p_low <= 1.0)) {
                            throw std::invalid_argument(
                                "two-point weight needs positive support and p in [0,1]");
                          }
                        },
                        [](const UniformWeight& w) {
                          if (!(w.lower > 0.0) || !(w.upper > w.lower)) {
                            throw std::invalid_argument("uniform weight needs 0 < a < b");
                          }
                        },
                        [](const ShiftedGammaWeight& w) {
                          if (!(w.shape > 0.0) || !(w.scale > 0.0) || !(w.shift > 0.0)) {
                            throw std::invalid_argument(
                                "shifted gamma weight needs shape, scale, shift > 0");
                          }
                        }},
             repr_);
}

double WeightDistribution::Sample(RngStream& rng) const {
  return std::visit(
      Overloaded{[](const DegenerateWeight& w) { return w.value; },
                 [&](const TwoPointWeight& w) { return rng.Uniform() < w.p_low ? w.low : w.high; },
                 [&](const UniformWeight& w) { return rng.Uniform(w.lower, w.upper); },
                 [&](const ShiftedGammaWeight& w) {
                   return w.shift + rng.Gamma(w.shape, w.scale);
                 }},
      repr_);
}

std::string WeightDistribution::Describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(
      Overloaded{[&](const DegenerateWeight& w) { out << "degenerate(" << w.value << ")"; },
                 [&](const TwoPointWeight& w) {
                   out << "two_point(" << w.low << ", " << w.high << ", p_low=" << w.p_low
                       << ")";
                 },
                 [&](const UniformWeight& w) {
                   out << "uniform(" << w.lower << ", " << w.upper << ")";
                 },
                 [&](const ShiftedGammaWeight& w) {
                   out << "shifted_gamma(shape=" << w.shape << ", scale=" << w.scale
                       << ", shift=" << w.shift << ")";
                 }},
      repr_);
  return out.str();
}

MixtureDistribution::MixtureDistribution(BaseMeasure base, double base_weight,
                                         std::vector<Atom> atoms)
    : base_(std::move(base)) {
  if (!(base_weight >= 0.0)) throw std::invalid_argument("mixture: negative base weight");
  double total = base_weight;
  for (const Atom& a : atoms) {
    if (!(a.weight >= 0.0)) throw std::invalid_argument("mixture: negative atom weight");
    total += a.weight;
  }
  if (!(total > 0.0)) throw std::invalid_argument("mixture: total weight must be positive");
  base_probability_ = base_weight / total;
  std::erase_if(atoms, [](const Atom& a) { return a.weight == 0.0; });
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.value < b.value; });
  atoms_.reserve(atoms.size());
  cumulative_.reserve(atoms.size());
  double acc = 0.0;
  for (const Atom& a : atoms) {
    const double p = a.weight / total;
    atoms_.push_back({a.value, p});
    acc += p;
    cumulative_.push_back(acc);
  }
}

double MixtureDistribution::TotalProbability() const {
  return base_probability_ + (cumulative_.empty() ? 0.0 : cumulative_.back());
}

double MixtureDistribution::RawMoment(int k) const {
  RequireMomentOrder(k);
  double acc = base_probability_ > 0.0 ? base_probability_ * base_.RawMoment(k) : 0.0;
  for (const Atom& a : atoms_) acc += a.weight * std::pow(a.value, k);
  return acc;
}

double MixtureDistribution::Variance() const {
  const double mean = Mean();
  double acc = base_probability_ > 0.0
                   ? base_probability_ * (base_.Variance() +
                                          (base_.Mean() - mean) * (base_.Mean() - mean))
                   : 0.0;
  for (const Atom& a : atoms_) acc += a.weight * (a.value - mean) * (a.value - mean);
  return acc;
}

double MixtureDistribution::ExpectPolynomial(std::span<const double> coefficients) const {
  if (coefficients.size() > 5) throw std::invalid_argument("polynomial degree must be <= 4");
  double acc = 0.0;
  if (base_probability_ > 0.0) {
    double base_part = 0.0;
    for (std::size_t d = 0; d < coefficients.size(); ++d) {
      base_part += coefficients[d] * base_.RawMoment(static_cast<int>(d));
    }
    acc += base_probability_ * base_part;
  }
  for (const Atom& a : atoms_) {
    double value = 0.0;
    for (std::size_t d = coefficients.size(); d-- > 0;) value = value * a.value + coefficients[d];
    acc += a.weight * value;
  }
  return acc;
}

double MixtureDistribution::Cdf(double x) const {
  const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                   [](double v, const Atom& a) { return v < a.value; });
  const double atom_part = it == atoms_.begin() ? 0.0 : cumulative_[it - atoms_.begin() - 1];
  return base_probability_ * base_.Cdf(x) + atom_part;
}

double MixtureDistribution::CdfLeft(double x) const {
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                   [](const Atom& a, double v) { return a.value < v; });
  const double atom_part = it == atoms_.begin() ? 0.0 : cumulative_[it - atoms_.begin() - 1];
  return base_probability_ * base_.CdfLeft(x) + atom_part;
}

double MixtureDistribution::Sample(RngStream& rng) const {
  const double u = rng.Uniform() * TotalProbability();
  if (u < base_probability_ || atoms_.empty()) return base_.Sample(rng);
  const double target = u - base_probability_;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  const std::size_t idx = std::min<std::size_t>(it - cumulative_.begin(), atoms_.size() - 1);
  return atoms_[idx].value;
}

}  // namespace pcid
