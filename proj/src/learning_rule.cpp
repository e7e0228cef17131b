#include "kuramoto/learning_rule.hpp"

#include <algorithm>

#include "kuramoto/network.hpp"

namespace kuramoto {

LearningRule LearningRule::hebbian() { return LearningRule{}; }

LearningRule LearningRule::shifted_cosine(double offset) {
  if (!std::isfinite(offset)) throw InvalidInput("learning rule offset must be finite");
  LearningRule r;
  r.kind_ = Kind::shifted_cosine;
  r.offset_ = offset;
  r.cos_offset_ = std::cos(offset);
  r.sin_offset_ = std::sin(offset);
  return r;
}

LearningRule LearningRule::tabulated(std::vector<double> samples) {
  if (samples.size() < 4) throw InvalidInput("tabulated learning rule needs at least 4 samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw InvalidInput("tabulated learning rule has a non-finite sample");
  LearningRule r;
  r.kind_ = Kind::tabulated;
  r.samples_ = std::move(samples);
  return r;
}

std::string LearningRule::name() const {
  switch (kind_) {
    case Kind::hebbian: return "hebbian";
    case Kind::shifted_cosine: return "shifted-cosine";
    case Kind::tabulated: return "tabulated";
  }
  return "unknown";
}

double LearningRule::spline(double s, bool derivative) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const auto n = static_cast<long>(samples_.size());
  const double h = two_pi / static_cast<double>(n);
  double x = std::fmod(s, two_pi);
  if (x < 0) x += two_pi;
  const double pos = x / h;
  long k = static_cast<long>(std::floor(pos));
  const double t = pos - static_cast<double>(k);
  auto at = [&](long idx) { return samples_[static_cast<std::size_t>(((idx % n) + n) % n)]; };
  const double p0 = at(k), p1 = at(k + 1);
  // Catmull-Rom tangents, in units of the sample spacing.
  const double m0 = 0.5 * (at(k + 1) - at(k - 1));
  const double m1 = 0.5 * (at(k + 2) - at(k));
  const double t2 = t * t, t3 = t2 * t;
  if (!derivative) {
    return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
  }
  const double dt = (6 * t2 - 6 * t) * p0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * p1 + (3 * t2 - 2 * t) * m1;
  return dt / h;
}

double LearningRule::c1_norm() const {
  if (kind_ != Kind::tabulated) return 1.0;
  constexpr int grid = 4096;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double h = two_pi / grid;
  double norm = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double s = h * k;
    const double slope = (value(s + h) - value(s - h)) / (2 * h);
    norm = std::max({norm, std::abs(value(s)), std::abs(slope)});
  }
  return norm;
}

PlasticityParams PlasticityParams::make(double gamma, double mu, LearningRule rule) {
  if (!(gamma > 0) || !std::isfinite(gamma)) throw InvalidInput("gamma must be a positive finite number");
  if (!(mu >= 0) || !std::isfinite(mu)) throw InvalidInput("mu must be a non-negative finite number");
  PlasticityParams p;
  p.gamma = gamma;
  p.mu = mu;
  p.delta = rule.c1_norm();
  p.rule = std::move(rule);
  if (!(p.delta > 0)) throw InvalidInput("learning rule has zero C1 norm");
  return p;
}

}  // namespace kuramoto
