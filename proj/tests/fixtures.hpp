#pragma once

#include <cmath>
#include <vector>

#include "phcert/rn_model.hpp"
#include "phcert/tabulated_profile.hpp"

namespace fixture {

/// RN sampled uniformly with spacing `dr` on [lo, mid], log-spaced beyond up to hi.
inline phcert::RadialProfile tabulated_rn(double M, double Q, double lo, double mid, double hi,
                                          double dr, int tail_points = 400) {
  std::vector<double> rs;
  const int n = static_cast<int>(std::ceil((mid - lo) / dr));
  for (int i = 0; i <= n; ++i) rs.push_back(lo + (mid - lo) * i / n);
  for (int i = 1; i <= tail_points; ++i) {
    rs.push_back(mid * std::pow(hi / mid, static_cast<double>(i) / tail_points));
  }
  const auto exact = phcert::rn_profile({M, Q});
  return phcert::make_tabulated_profile(phcert::sample_profile(exact, rs), "tabulated RN");
}

}  // namespace fixture
