#include "phcert/geodesic_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "phcert/errors.hpp"

namespace phcert {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 3>;  // r, p_r, phi

GeodesicDerivative rhs_from_sample(const RadialSample& s, double p_r, double E, double L) {
  const double r = s.r;
  GeodesicDerivative d;
  d.dr = p_r;
  d.dp_r = (s.df / s.f) * p_r * p_r +
           s.f * s.f * (L * L / (r * r * r) - E * E * s.dN / (s.N * s.N * s.N));
  d.dphi = L / (r * r);
  return d;
}

double constraint_from_sample(const RadialSample& s, double p_r, double E, double L) {
  const double t0 = E * E / (s.N * s.N);
  const double t1 = p_r * p_r / (s.f * s.f);
  const double t2 = L * L / (s.r * s.r);
  const double scale = t0 + t1 + t2;
  return scale > 0.0 ? std::abs(-t0 + t1 + t2) / scale : 0.0;
}

struct BelowDomain {};
struct AboveDomain {};

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::lambda_max: return "lambda_max";
    case Termination::domain_exit: return "domain_exit";
    case Termination::horizon_approach: return "horizon_approach";
    case Termination::step_underflow: return "step_underflow";
  }
  return "?";
}

const char* to_string(TrappingVerdict v) {
  switch (v) {
    case TrappingVerdict::trapped: return "trapped";
    case TrappingVerdict::escaped: return "escaped";
    case TrappingVerdict::plunged: return "plunged";
  }
  return "?";
}

GeodesicDerivative radial_rhs(const RadialProfile& profile, const NullGeodesicState& s) {
  if (!(s.r > profile.r_min()) || !(s.r < profile.r_max())) {
    throw DomainError("geodesic radius outside the open profile domain");
  }
  return rhs_from_sample(profile.at(s.r), s.p_r, s.E, s.L);
}

double null_constraint_residual(const RadialProfile& profile, const NullGeodesicState& s) {
  return constraint_from_sample(profile.at(s.r), s.p_r, s.E, s.L);
}

std::vector<double> find_circular_null_orbits(const RadialProfile& profile, double lo, double hi,
                                              int scan_points) {
  lo = std::max(lo, profile.r_min());
  hi = std::min(hi, profile.r_max());
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidInput("circular-orbit bracket must satisfy 0 < lo < hi");
  if (scan_points < 3) scan_points = 3;

  auto slope = [&](double r) { return effective_potential_slope(profile.at(r)); };

  std::vector<double> xs(static_cast<std::size_t>(scan_points));
  const double step = std::log(hi / lo) / (scan_points - 1);
  for (int i = 0; i < scan_points; ++i) xs[i] = lo * std::exp(step * i);
  xs.back() = hi;
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = slope(xs[i]);

  std::vector<double> roots;
  const boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (ys[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if ((ys[i] < 0.0) != (ys[i + 1] < 0.0) && ys[i + 1] != 0.0) {
      std::uintmax_t iters = 200;
      auto [a, b] = boost::math::tools::toms748_solve(slope, xs[i], xs[i + 1], ys[i], ys[i + 1],
                                                       tol, iters);
      roots.push_back(0.5 * (a + b));
    }
  }
  if (ys.back() == 0.0) roots.push_back(xs.back());

  // Touching roots: |slope| dips without changing sign.
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double a = std::abs(ys[i - 1]), b = std::abs(ys[i]), c = std::abs(ys[i + 1]);
    const bool same_sign = (ys[i - 1] < 0.0) == (ys[i] < 0.0) && (ys[i] < 0.0) == (ys[i + 1] < 0.0);
    if (!(same_sign && b < a && b < c)) continue;
    auto abs_slope = [&](double r) { return std::abs(slope(r)); };
    auto [rmin, vmin] = boost::math::tools::brent_find_minima(abs_slope, xs[i - 1], xs[i + 1],
                                                              std::numeric_limits<double>::digits / 2);
    const auto s = profile.at(rmin);
    const double term_scale = 2.0 * s.N * s.N / (rmin * rmin * rmin);
    if (vmin <= 1e-10 * term_scale) roots.push_back(rmin);
  }

  std::sort(roots.begin(), roots.end(), std::greater<>());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-12 * x; }),
              roots.end());
  return roots;
}

Trajectory integrate_null_geodesic(const RadialProfile& profile, const NullGeodesicState& initial,
                                   double lambda_max, double tol, const IntegratorOptions& opts) {
  if (!(lambda_max > 0.0)) throw InvalidInput("lambda_max must be positive");
  Trajectory traj;
  traj.E = initial.E;
  traj.L = initial.L;

  const double E = initial.E, L = initial.L;
  auto system = [&](const State& x, State& dxdt, double /*lambda*/) {
    const double r = x[0];
    if (!(r > profile.r_min())) throw BelowDomain{};
    if (!(r < profile.r_max())) throw AboveDomain{};
    const auto d = rhs_from_sample(profile.at(r), x[1], E, L);
    dxdt[0] = d.dr;
    dxdt[1] = d.dp_r;
    dxdt[2] = d.dphi;
  };

  auto record = [&](double lambda, const State& x) {
    const auto s = profile.at(x[0]);
    traj.points.push_back({lambda, x[0], x[2], x[1], constraint_from_sample(s, x[1], E, L)});
    return s;
  };

  State x{initial.r, initial.p_r, initial.phi};
  double lambda = 0.0;
  const auto s0 = record(lambda, x);
  if (s0.N < opts.lapse_floor) {
    traj.termination = Termination::horizon_approach;
    return traj;
  }

  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol);
  const double max_step = opts.max_step > 0.0 ? opts.max_step : lambda_max / 200.0;
  double dt = std::min(max_step, 1e-3 * std::max(initial.r, 1e-12));

  while (lambda < lambda_max) {
    dt = std::min({dt, max_step, lambda_max - lambda});
    const double min_dt = opts.min_step * std::max(x[0], 1e-300);
    if (dt < min_dt) {
      traj.termination = Termination::step_underflow;
      return traj;
    }
    State trial = x;
    double t = lambda;
    odeint::controlled_step_result res;
    try {
      res = stepper.try_step(system, trial, t, dt);
    } catch (const BelowDomain&) {
      stepper.reset();
      dt *= 0.5;
      if (dt < min_dt) {
        const double n_here = profile.at(x[0]).N;
        traj.termination =
            n_here < 1e-3 ? Termination::horizon_approach : Termination::domain_exit;
        return traj;
      }
      continue;
    } catch (const AboveDomain&) {
      stepper.reset();
      dt *= 0.5;
      if (dt < min_dt) {
        traj.termination = Termination::domain_exit;
        return traj;
      }
      continue;
    }
    if (res == odeint::fail) continue;  // dt already reduced by the controller

    x = trial;
    lambda = t;
    const auto s = record(lambda, x);
    if (s.N < opts.lapse_floor) {
      traj.termination = Termination::horizon_approach;
      return traj;
    }
  }
  traj.termination = Termination::lambda_max;
  return traj;
}

NullGeodesicState tangent_launch(const RadialProfile& profile, double r0, double lambda_max,
                                 double sweep_radians) {
  const auto s = profile.at(r0);
  NullGeodesicState st;
  st.r = r0;
  st.p_r = 0.0;
  st.L = sweep_radians * r0 * r0 / lambda_max;
  st.E = st.L * s.N / r0;
  return st;
}

TrappingReport trapping_test(const RadialProfile& profile, double r0, double lambda_max,
                             double tol, const TrappingOptions& opts) {
  if (!(r0 > profile.r_min()) || !(r0 < profile.r_max())) {
    throw DomainError("trapping launch radius outside the open profile domain");
  }
  const auto init = tangent_launch(profile, r0, lambda_max, opts.sweep_radians);
  const auto traj = integrate_null_geodesic(profile, init, lambda_max, tol);

  TrappingReport rep;
  rep.r0 = r0;
  rep.termination = traj.termination;
  rep.affine_length = traj.points.back().lambda;
  const double band = opts.relative_tolerance * r0;
  int first_exit = 0;
  for (const auto& p : traj.points) {
    const double dev = p.r - r0;
    rep.max_deviation = std::max(rep.max_deviation, std::abs(dev));
    rep.max_constraint_residual = std::max(rep.max_constraint_residual, p.constraint_residual);
    if (first_exit == 0 && std::abs(dev) >= band) first_exit = dev > 0.0 ? 1 : -1;
  }
  const bool full_length = traj.termination == Termination::lambda_max;
  if (rep.max_deviation < band && full_length) {
    rep.verdict = TrappingVerdict::trapped;
  } else if (first_exit > 0) {
    rep.verdict = TrappingVerdict::escaped;
  } else if (first_exit < 0) {
    rep.verdict = TrappingVerdict::plunged;
  } else {
    rep.verdict = traj.termination == Termination::horizon_approach ? TrappingVerdict::plunged
                                                                    : TrappingVerdict::escaped;
  }
  return rep;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  out << "lambda,r,phi,p_r,constraint_residual\n" << std::setprecision(17);
  for (const auto& p : t.points) {
    out << p.lambda << ',' << p.r << ',' << p.phi << ',' << p.p_r << ',' << p.constraint_residual
        << '\n';
  }
}

}  // namespace phcert
