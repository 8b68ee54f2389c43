#pragma once

#include <stdexcept>

#include "galilei/common.hpp"
#include "galilei/group.hpp"

namespace galilei {

// Canonical coordinates (p, q) on the massive phase spaces.
struct PQState {
  double p = 0.0;
  double q = 0.0;
};

// Spacetime coordinates (tau, q) on the force orbit. tau stands for p/f,
// so in this chart the canonical form dp ^ dq reads f dtau ^ dq.
struct TauQState {
  double tau = 0.0;
  double q = 0.0;
};

// Tangent vectors, one type per chart so pairings cannot mix charts.
struct PQTangent {
  double dp = 0.0;
  double dq = 0.0;
};

struct TauQTangent {
  double dtau = 0.0;
  double dq = 0.0;
};

// Momentum triple dual to boosts, space translations and time translations.
struct Momentum {
  double jK = 0.0;
  double jP = 0.0;
  double jE = 0.0;
};

inline double component(const Momentum& j, Generator kind) {
  switch (kind) {
    case Generator::Boost:
      return j.jK;
    case Generator::SpaceTranslation:
      return j.jP;
    case Generator::TimeTranslation:
      return j.jE;
  }
  return 0.0;
}

// Phase space of a massive particle driven by a constant force, labelled by
// the mass m, the force f and the internal energy U.
struct ForcedMassiveOrbit {
  double m;
  double f;
  double U;

  ForcedMassiveOrbit(double mass, double force, double internal_energy)
      : m(mass), f(force), U(internal_energy) {
    require_finite(m, "m");
    require_finite(f, "f");
    require_finite(U, "U");
    if (!(m > 0.0)) throw std::invalid_argument("m must be > 0");
  }

  using State = PQState;
  using Tangent = PQTangent;
};

// Phase space of a free massive particle, labelled by the mass m and the
// internal energy U.
struct FreeMassiveOrbit {
  double m;
  double U;

  FreeMassiveOrbit(double mass, double internal_energy)
      : m(mass), U(internal_energy) {
    require_finite(m, "m");
    require_finite(U, "U");
    if (!(m > 0.0)) throw std::invalid_argument("m must be > 0");
  }

  using State = PQState;
  using Tangent = PQTangent;
};

// Spacetime-like phase space labelled by a nonzero force f and the
// invariant K = jK - jP^2/(2f).
struct SpacetimeOrbit {
  double f;
  double K;

  SpacetimeOrbit(double force, double invariant) : f(force), K(invariant) {
    require_finite(f, "f");
    require_finite(K, "K");
    if (f == 0.0) throw std::invalid_argument("f must be nonzero");
  }

  using State = TauQState;
  using Tangent = TauQTangent;
};

// --- Point actions --------------------------------------------------------
//
// All three actions are affine in the state, left actions for compose(),
// and symplectic for the chart's canonical form.

inline PQState act(const ForcedMassiveOrbit& o, const GroupElement& g,
                   const PQState& s) {
  return {s.p - o.m * g.v + o.f * g.t,
          s.q + (s.p / o.m) * g.t + (o.f / o.m) * (g.t * g.t / 2.0) + g.x -
              g.v * g.t};
}

inline PQState act(const FreeMassiveOrbit& o, const GroupElement& g,
                   const PQState& s) {
  return {s.p - o.m * g.v, s.q + (s.p / o.m) * g.t + g.x - g.v * g.t};
}

inline TauQState act(const SpacetimeOrbit&, const GroupElement& g,
                     const TauQState& s) {
  return {s.tau + g.t, s.q + g.v * s.tau + g.x};
}

// --- Hamiltonian vector fields ---------------------------------------------
//
// Sign convention, pinned and tested: the field of a generator X is the
// negative of the derivative of its one-parameter action,
//   rho(X) = -(d/ds)|_{s=0} act(exp_generator(X, s), .)

inline PQTangent hamiltonian_field(const ForcedMassiveOrbit& o, Generator X,
                                   const PQState& s) {
  switch (X) {
    case Generator::Boost:
      return {o.m, 0.0};
    case Generator::SpaceTranslation:
      return {0.0, -1.0};
    case Generator::TimeTranslation:
      return {-o.f, -s.p / o.m};
  }
  return {};
}

inline PQTangent hamiltonian_field(const FreeMassiveOrbit& o, Generator X,
                                   const PQState& s) {
  switch (X) {
    case Generator::Boost:
      return {o.m, 0.0};
    case Generator::SpaceTranslation:
      return {0.0, -1.0};
    case Generator::TimeTranslation:
      return {0.0, -s.p / o.m};
  }
  return {};
}

inline TauQTangent hamiltonian_field(const SpacetimeOrbit&, Generator X,
                                     const TauQState& s) {
  switch (X) {
    case Generator::Boost:
      return {0.0, -s.tau};
    case Generator::SpaceTranslation:
      return {0.0, -1.0};
    case Generator::TimeTranslation:
      return {-1.0, 0.0};
  }
  return {};
}

// --- Momentum maps ----------------------------------------------------------
//
// The jE (massive kinds) resp. jK (spacetime kind) component carries the
// orbit label as an additive offset, so that casimir() below recovers the
// label exactly from any momentum produced here.

inline Momentum momentum(const ForcedMassiveOrbit& o, const PQState& s) {
  return {o.m * s.q, s.p, s.p * s.p / (2.0 * o.m) - o.f * s.q + o.U};
}

inline Momentum momentum(const FreeMassiveOrbit& o, const PQState& s) {
  return {o.m * s.q, s.p, s.p * s.p / (2.0 * o.m) + o.U};
}

inline Momentum momentum(const SpacetimeOrbit& o, const TauQState& s) {
  return {o.f * (s.tau * s.tau / 2.0) + o.K, o.f * s.tau, -o.f * s.q};
}

// --- Casimir invariants -----------------------------------------------------
//
// Constant on each orbit: the internal energy U for the massive kinds
// (with q recovered as jK/m) and K for the spacetime kind.

inline double casimir(const ForcedMassiveOrbit& o, const Momentum& j) {
  return j.jE - j.jP * j.jP / (2.0 * o.m) + o.f * (j.jK / o.m);
}

inline double casimir(const FreeMassiveOrbit& o, const Momentum& j) {
  return j.jE - j.jP * j.jP / (2.0 * o.m);
}

inline double casimir(const SpacetimeOrbit& o, const Momentum& j) {
  return j.jK - j.jP * j.jP / (2.0 * o.f);
}

inline double invariant_label(const ForcedMassiveOrbit& o) { return o.U; }
inline double invariant_label(const FreeMassiveOrbit& o) { return o.U; }
inline double invariant_label(const SpacetimeOrbit& o) { return o.K; }

// --- Symplectic pairing -----------------------------------------------------

// sigma = dp ^ dq on the massive charts.
inline double symplectic_pairing(const PQTangent& u, const PQTangent& w) {
  return u.dp * w.dq - u.dq * w.dp;
}

// The same form in the (tau, q) chart carries the factor f, since p = f tau.
inline double symplectic_pairing(const SpacetimeOrbit& o, const TauQTangent& u,
                                 const TauQTangent& w) {
  return o.f * (u.dtau * w.dq - u.dq * w.dtau);
}

// Orbit-context overloads so generic code can pair in any chart.
inline double symplectic_pairing(const ForcedMassiveOrbit&, const PQTangent& u,
                                 const PQTangent& w) {
  return symplectic_pairing(u, w);
}

inline double symplectic_pairing(const FreeMassiveOrbit&, const PQTangent& u,
                                 const PQTangent& w) {
  return symplectic_pairing(u, w);
}

}  // namespace galilei
