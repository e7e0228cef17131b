#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace kuramoto {

/// 2π-periodic learning rule Γ driving the coupling plasticity.
///
/// Three kinds are supported: the Hebbian rule cos(s), a phase-shifted cosine
/// cos(s + offset), and a tabulated rule given by uniform samples over [0, 2π)
/// and interpolated with periodic cubic Hermite (Catmull-Rom) splines, which
/// keeps Γ continuously differentiable.
class LearningRule {
 public:
  enum class Kind { hebbian, shifted_cosine, tabulated };

  static LearningRule hebbian();
  static LearningRule shifted_cosine(double offset);
  /// Needs at least 4 samples; sample k sits at s = 2πk/size.
  static LearningRule tabulated(std::vector<double> samples);

  Kind kind() const noexcept { return kind_; }
  double offset() const noexcept { return offset_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  std::string name() const;

  double value(double s) const {
    switch (kind_) {
      case Kind::hebbian: return std::cos(s);
      case Kind::shifted_cosine: return std::cos(s + offset_);
      case Kind::tabulated: return spline(s, false);
    }
    return 0.0;
  }

  double derivative(double s) const {
    switch (kind_) {
      case Kind::hebbian: return -std::sin(s);
      case Kind::shifted_cosine: return -std::sin(s + offset_);
      case Kind::tabulated: return spline(s, true);
    }
    return 0.0;
  }

  /// Γ(s) given sin(s) and cos(s); avoids a second transcendental call for the
  /// cosine rules.
  double value(double s, double sin_s, double cos_s) const {
    switch (kind_) {
      case Kind::hebbian: return cos_s;
      case Kind::shifted_cosine: return cos_s * cos_offset_ - sin_s * sin_offset_;
      case Kind::tabulated: return spline(s, false);
    }
    return 0.0;
  }

  /// |Γ|_1 = max(|Γ|_0, |Γ'|_0). Exact (1) for the cosine rules; for tabulated
  /// rules the maximum over a 4096-point grid of |Γ| and of |Γ'| taken by
  /// central differences.
  double c1_norm() const;

  friend bool operator==(const LearningRule&, const LearningRule&) = default;

 private:
  double spline(double s, bool derivative) const;

  Kind kind_ = Kind::hebbian;
  double offset_ = 0.0;
  double cos_offset_ = 1.0;
  double sin_offset_ = 0.0;
  std::vector<double> samples_;
};

/// Plasticity parameters (γ, μ, Γ, δ). γ > 0 and μ >= 0; μ = 0 freezes the
/// plasticity and is accepted as a limiting case.
struct PlasticityParams {
  double gamma = 1.0;
  double mu = 0.0;
  LearningRule rule = LearningRule::hebbian();
  double delta = 1.0;

  /// Validates γ and μ and sets δ = |Γ|_1.
  static PlasticityParams make(double gamma, double mu, LearningRule rule = LearningRule::hebbian());
};

}  // namespace kuramoto
