// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "tentflow/tent_norms.hpp"

namespace tentflow::detail {

/// Streams per-node densities into per-ball tent integrals
/// (r^{-e} int_0^{r^2} int_B g t^w)^{1/p}.
class TentAccumulator {
 public:
  TentAccumulator(const BallFamily& balls, const TimeGrid& tg, double time_exp, double radius_exp, double p);

  /// Whether node m contributes to any ball.
  bool needed(std::size_t m) const noexcept;
  void add(std::size_t m, std::span<const double> density);

  TentProfile profile() const;
  NormReport report(const std::string& family, double param) const;

 private:
  const BallFamily& balls_;
  const TimeGrid& tg_;
  double time_exp_, radius_exp_, p_;
  std::vector<std::vector<double>> integral_;
  std::vector<std::vector<double>> tail_;
};

/// Throws unless the grid covers (t_min, r^2) for every ball.
void check_coverage(const BallFamily& balls, const TimeGrid& tg);

}  // namespace tentflow::detail
