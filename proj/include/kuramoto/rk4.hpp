#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kuramoto {

/// Scratch buffers for classical fourth-order Runge-Kutta steps on flat states.
class Rk4Workspace {
 public:
  explicit Rk4Workspace(std::size_t dim = 0) { resize(dim); }

  void resize(std::size_t dim) {
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &tmp_}) v->assign(dim, 0.0);
  }
  std::size_t dim() const noexcept { return tmp_.size(); }

  /// Advances y(t) to y(t + h); h may be negative. `rhs(t, y, dydt)` must
  /// fill dydt completely.
  template <typename Rhs>
  void step(std::span<double> y, double t, double h, Rhs&& rhs) {
    const std::size_t n = y.size();
    const double half = 0.5 * h;
    rhs(t, std::span<const double>(y), std::span<double>(k1_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + half * k1_[i];
    rhs(t + half, std::span<const double>(tmp_), std::span<double>(k2_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + half * k2_[i];
    rhs(t + half, std::span<const double>(tmp_), std::span<double>(k3_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
    rhs(t + h, std::span<const double>(tmp_), std::span<double>(k4_));
    const double sixth = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) y[i] += sixth * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
  }

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace kuramoto
