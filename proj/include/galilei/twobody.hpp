#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "galilei/common.hpp"
#include "galilei/group.hpp"
#include "galilei/orbits.hpp"

namespace galilei {

// Two massive particles, each driven by its own constant force.
struct TwoBodySystem {
  double m1;
  double m2;
  double f1;
  double f2;

  TwoBodySystem(double mass1, double mass2, double force1, double force2)
      : m1(mass1), m2(mass2), f1(force1), f2(force2) {
    require_finite(m1, "m1");
    require_finite(m2, "m2");
    require_finite(f1, "f1");
    require_finite(f2, "f2");
    if (!(m1 > 0.0)) throw std::invalid_argument("m1 must be > 0");
    if (!(m2 > 0.0)) throw std::invalid_argument("m2 must be > 0");
  }

  ForcedMassiveOrbit orbit1() const { return {m1, f1, 0.0}; }
  ForcedMassiveOrbit orbit2() const { return {m2, f2, 0.0}; }
};

// Raw product coordinates of the two particles.
struct ProductState {
  double p1 = 0.0;
  double q1 = 0.0;
  double p2 = 0.0;
  double q2 = 0.0;
};

// Total mass, reduced mass, total force and relative force.
struct DerivedParams {
  double m;
  double mu;
  double f;
  double phi;
};

// Center-of-mass coordinates (p, q) and relative coordinates (pi, rho).
struct BarycenterState {
  double p = 0.0;
  double q = 0.0;
  double pi = 0.0;
  double rho = 0.0;
};

// A pairwise transformation sharing one time shift, in reduced coordinates:
// the center-of-mass shift/boost (x, v), the common time shift t, and the
// relative shift/boost (r, u). Equivalent to the pair
//   ((x + (m2/m) r, t, v + (m2/m) u), (x - (m1/m) r, t, v - (m1/m) u)).
struct BarycenterGroupElement {
  double x = 0.0;
  double t = 0.0;
  double v = 0.0;
  double r = 0.0;
  double u = 0.0;

  static constexpr BarycenterGroupElement identity() {
    return {0.0, 0.0, 0.0, 0.0, 0.0};
  }
};

struct TwoBodyMomentum {
  double jP_cm = 0.0;
  double jK_cm = 0.0;
  double jP_int = 0.0;
  double jK_int = 0.0;
  double jE = 0.0;
};

struct EnergySplit {
  double kinetic = 0.0;
  double potential = 0.0;

  double total() const { return kinetic + potential; }
};

inline DerivedParams derive_params(const TwoBodySystem& s) {
  const double m = s.m1 + s.m2;
  return {m, s.m1 * s.m2 / m, s.f1 + s.f2, (s.m2 * s.f1 - s.m1 * s.f2) / m};
}

// Linear canonical change of variables to center-of-mass plus relative
// coordinates. Preserves dp1^dq1 + dp2^dq2 = dp^dq + dpi^drho.
inline BarycenterState to_barycenter(const TwoBodySystem& s,
                                     const ProductState& x) {
  const double m = s.m1 + s.m2;
  return {x.p1 + x.p2, (s.m1 * x.q1 + s.m2 * x.q2) / m,
          (s.m2 * x.p1 - s.m1 * x.p2) / m, x.q1 - x.q2};
}

// Exact inverse of to_barycenter.
inline ProductState from_barycenter(const TwoBodySystem& s,
                                    const BarycenterState& b) {
  const double m = s.m1 + s.m2;
  return {(s.m1 / m) * b.p + b.pi, b.q + (s.m2 / m) * b.rho,
          (s.m2 / m) * b.p - b.pi, b.q - (s.m1 / m) * b.rho};
}

// Independent transformations of the two particles, each on its own orbit.
inline ProductState product_act(const TwoBodySystem& sys,
                                const GroupElement& g1, const GroupElement& g2,
                                const ProductState& s) {
  const PQState a = act(sys.orbit1(), g1, {s.p1, s.q1});
  const PQState b = act(sys.orbit2(), g2, {s.p2, s.q2});
  return {a.p, a.q, b.p, b.q};
}

// Reduced-coordinate pair of a pairwise transformation.
inline std::pair<GroupElement, GroupElement> to_particle_pair(
    const TwoBodySystem& sys, const BarycenterGroupElement& g) {
  const double m = sys.m1 + sys.m2;
  return {GroupElement{g.x + (sys.m2 / m) * g.r, g.t, g.v + (sys.m2 / m) * g.u},
          GroupElement{g.x - (sys.m1 / m) * g.r, g.t,
                       g.v - (sys.m1 / m) * g.u}};
}

// Inverse of to_particle_pair. The two elements must share the time shift.
inline BarycenterGroupElement to_barycentric(const TwoBodySystem& sys,
                                             const GroupElement& g1,
                                             const GroupElement& g2) {
  if (g1.t != g2.t) {
    throw std::invalid_argument("pair must share a common time shift");
  }
  const double m = sys.m1 + sys.m2;
  return {(sys.m1 * g1.x + sys.m2 * g2.x) / m, g1.t,
          (sys.m1 * g1.v + sys.m2 * g2.v) / m, g1.x - g2.x, g1.v - g2.v};
}

// Action of a pairwise transformation in reduced coordinates: the center of
// mass responds as a particle of mass m under force f, the relative particle
// as one of mass mu under force phi. Equals the conjugation of product_act
// by the barycenter change of variables.
inline BarycenterState barycentric_act(const TwoBodySystem& sys,
                                       const BarycenterGroupElement& g,
                                       const BarycenterState& b) {
  const DerivedParams d = derive_params(sys);
  const PQState cm = act(ForcedMassiveOrbit{d.m, d.f, 0.0},
                         GroupElement{g.x, g.t, g.v}, PQState{b.p, b.q});
  const PQState rel = act(ForcedMassiveOrbit{d.mu, d.phi, 0.0},
                          GroupElement{g.r, g.t, g.u}, PQState{b.pi, b.rho});
  return {cm.p, cm.q, rel.p, rel.q};
}

inline bool is_isolated(const DerivedParams& params, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  return std::abs(params.f) <= tol;
}

// Scale-aware detection of exact force cancellation.
inline double default_isolation_tolerance(const TwoBodySystem& sys) {
  return 1e-12 * std::max(1.0, std::abs(sys.f1) + std::abs(sys.f2));
}

// The pairwise transformation with relative parameters (r, t, u) that fixes
// the center-of-mass origin (p = 0, q = 0). For an isolated system the
// center-of-mass drift terms vanish.
inline std::pair<GroupElement, GroupElement> internal_group_element(
    const TwoBodySystem& sys, double r, double t, double u) {
  const DerivedParams d = derive_params(sys);
  const bool isolated = is_isolated(d, default_isolation_tolerance(sys));
  const double accel = isolated ? 0.0 : d.f / d.m;
  const double w1 = sys.m2 / d.m;
  const double w2 = sys.m1 / d.m;
  return {GroupElement{accel * (t * t / 2.0) + w1 * r, t, accel * t + w1 * u},
          GroupElement{accel * (t * t / 2.0) - w2 * r, t, accel * t - w2 * u}};
}

// Total energy split into kinetic and potential parts. The potential couples
// the center of mass to the total force and the relative position to the
// relative force; with f = 0 the isolated form is the same expression.
inline EnergySplit energy(const TwoBodySystem& sys, const BarycenterState& b) {
  const DerivedParams d = derive_params(sys);
  return {b.p * b.p / (2.0 * d.m) + b.pi * b.pi / (2.0 * d.mu),
          -d.f * b.q - d.phi * b.rho};
}

inline TwoBodyMomentum momenta(const TwoBodySystem& sys,
                               const BarycenterState& b) {
  const DerivedParams d = derive_params(sys);
  return {b.p, d.m * b.q, b.pi, d.mu * b.rho, energy(sys, b).total()};
}

// Closed-form time evolution: the pure time translation of the reduced
// action. Composes additively in t and conserves the total energy.
inline BarycenterState evolve(const TwoBodySystem& sys,
                              const BarycenterState& b, double t) {
  return barycentric_act(sys, {0.0, t, 0.0, 0.0, 0.0}, b);
}

struct TrajectorySample {
  double t;
  BarycenterState state;
  TwoBodyMomentum momentum;
};

// n_steps + 1 uniformly spaced samples of the closed-form flow, momenta
// attached. The first sample is b0, the last lands on t_end exactly.
inline std::vector<TrajectorySample> trajectory(const TwoBodySystem& sys,
                                                const BarycenterState& b0,
                                                double t_end, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  std::vector<TrajectorySample> rows;
  rows.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (int i = 0; i <= n_steps; ++i) {
    const double t =
        (i == n_steps) ? t_end : t_end * (static_cast<double>(i) / n_steps);
    const BarycenterState b = evolve(sys, b0, t);
    rows.push_back({t, b, momenta(sys, b)});
  }
  return rows;
}

}  // namespace galilei
