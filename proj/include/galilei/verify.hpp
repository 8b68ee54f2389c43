#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "galilei/common.hpp"
#include "galilei/group.hpp"
#include "galilei/orbits.hpp"
#include "galilei/twobody.hpp"

// Seeded randomized verification of the algebraic identities behind the
// group, orbit and two-body modules. Every check draws its inputs from a
// counter-based per-trial random stream, so a report is a pure function of
// (seed, trials) and trials may be evaluated in any order: aggregation is a
// max-reduction over scaled residuals.

namespace galilei {

// Tolerance classes. Exact-algebra identities sit at round-off level;
// identities routed through an action composition accumulate a few more
// roundings; finite-difference comparisons are limited by the step size.
inline constexpr double kExactTol = 1e-12;
inline constexpr double kActionTol = 1e-9;
inline constexpr double kFiniteDiffTol = 1e-6;

// Central first differences use kFdStep * max(1, |coordinate|). Second
// differences need a much larger step: with values of order 1e4 in the
// extreme mass-ratio regime, a 1e-5 step would leave ~1e-4 of pure round-off
// in (f(t+h) - 2f(t) + f(t-h)) / h^2, and the flows are quadratic in t so a
// large step costs no truncation error at all.
inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdSecondStep = 1e-2;

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::uint64_t kDefaultTrials = 1000;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Parameters of one randomized check.
struct CheckSpec {
  std::string name;
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  double tolerance = kExactTol;
  Interval state_range{-10.0, 10.0};
  Interval group_range{-10.0, 10.0};
  Interval mass_range{0.1, 10.0};
  Interval force_range{-10.0, 10.0};

  void validate() const {
    if (name.empty()) throw std::invalid_argument("name must be non-empty");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(tolerance > 0.0)) {
      throw std::invalid_argument("tolerance must be > 0");
    }
    for (const Interval* r :
         {&state_range, &group_range, &mass_range, &force_range}) {
      if (!(r->lo <= r->hi)) {
        throw std::invalid_argument("range must be non-empty");
      }
    }
  }
};

struct CheckRecord {
  std::string name;
  std::uint64_t trials = 0;
  double max_residual = 0.0;
  bool passed = false;
  double tolerance = 0.0;
  std::string worst_input;
};

struct VerificationReport {
  std::vector<CheckRecord> records;

  bool overall_pass() const {
    return std::all_of(records.begin(), records.end(),
                       [](const CheckRecord& r) { return r.passed; });
  }

  double max_residual() const {
    double worst = 0.0;
    for (const CheckRecord& r : records) {
      worst = std::max(worst, r.max_residual);
    }
    return worst;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

inline std::array<double, 2> chart(const PQState& s) { return {s.p, s.q}; }
inline std::array<double, 2> chart(const TauQState& s) { return {s.tau, s.q}; }
inline std::array<double, 2> chart(const PQTangent& u) { return {u.dp, u.dq}; }
inline std::array<double, 2> chart(const TauQTangent& u) {
  return {u.dtau, u.dq};
}

template <typename T>
T from_chart(const std::array<double, 2>& a) {
  return T{a[0], a[1]};
}

inline const char* generator_name(Generator kind) {
  switch (kind) {
    case Generator::Boost:
      return "K";
    case Generator::SpaceTranslation:
      return "P";
    case Generator::TimeTranslation:
      return "E";
  }
  return "?";
}

inline std::string describe(const char* label,
                            std::initializer_list<double> xs) {
  std::string out = label;
  out += "=(";
  bool first = true;
  for (double x : xs) {
    if (!first) out += ",";
    out += format_double(x);
    first = false;
  }
  out += ")";
  return out;
}

inline std::string describe(const GroupElement& g, const char* label = "g") {
  return describe(label, {g.x, g.t, g.v});
}

inline std::string describe(const ForcedMassiveOrbit& o) {
  return describe("orbit[m,f,U]", {o.m, o.f, o.U});
}
inline std::string describe(const FreeMassiveOrbit& o) {
  return describe("orbit[m,U]", {o.m, o.U});
}
inline std::string describe(const SpacetimeOrbit& o) {
  return describe("orbit[f,K]", {o.f, o.K});
}

}  // namespace detail

// Per-trial random stream derived from (seed, check name, trial index).
// The uniform mapping is spelled out instead of delegating to
// std::uniform_real_distribution so that reports are bit-identical across
// standard library implementations.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::string_view check_name,
           std::uint64_t trial)
      : engine_(detail::splitmix64(
            detail::splitmix64(detail::splitmix64(seed) ^
                               detail::fnv1a64(check_name)) ^
            trial)) {}

  double uniform(const Interval& range) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return range.lo + (range.hi - range.lo) * u;
  }

  // Draw from +-[range]; used for labels that must stay away from zero.
  double signed_magnitude(const Interval& range) {
    const double magnitude = uniform(range);
    return (engine_() & 1u) ? magnitude : -magnitude;
  }

 private:
  std::mt19937_64 engine_;
};

// Running max over residuals. The worst-case description is built lazily:
// nearly every trial loses the comparison, so its string is never assembled.
class ResidualTracker {
 public:
  template <typename Describe>
  void update(double residual, Describe&& describe) {
    if (!seen_ || residual > max_) {
      max_ = residual;
      worst_ = describe();
      seen_ = true;
    }
  }

  double max_residual() const { return max_; }
  const std::string& worst_input() const { return worst_; }

 private:
  double max_ = 0.0;
  std::string worst_;
  bool seen_ = false;
};

// Shared trial loop: one independent random stream per trial, max-reduced.
template <typename TrialFn>
CheckRecord run_check(const CheckSpec& spec, TrialFn&& trial_fn) {
  spec.validate();
  ResidualTracker tracker;
  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    TrialRng rng(spec.seed, spec.name, trial);
    trial_fn(rng, tracker);
  }
  return {spec.name,      spec.trials,
          tracker.max_residual(),
          tracker.max_residual() <= spec.tolerance,
          spec.tolerance, tracker.worst_input()};
}

// --- Input sampling ---------------------------------------------------------

inline GroupElement sample_group_element(TrialRng& rng,
                                         const CheckSpec& spec) {
  const double x = rng.uniform(spec.group_range);
  const double t = rng.uniform(spec.group_range);
  const double v = rng.uniform(spec.group_range);
  return {x, t, v};
}

template <typename Orbit>
Orbit sample_orbit(TrialRng& rng, const CheckSpec& spec);

template <>
inline ForcedMassiveOrbit sample_orbit<ForcedMassiveOrbit>(
    TrialRng& rng, const CheckSpec& spec) {
  const double m = rng.uniform(spec.mass_range);
  const double f = rng.uniform(spec.force_range);
  const double U = rng.uniform(spec.state_range);
  return {m, f, U};
}

template <>
inline FreeMassiveOrbit sample_orbit<FreeMassiveOrbit>(TrialRng& rng,
                                                       const CheckSpec& spec) {
  const double m = rng.uniform(spec.mass_range);
  const double U = rng.uniform(spec.state_range);
  return {m, U};
}

template <>
inline SpacetimeOrbit sample_orbit<SpacetimeOrbit>(TrialRng& rng,
                                                   const CheckSpec& spec) {
  const double f = rng.signed_magnitude(spec.mass_range);
  const double K = rng.uniform(spec.state_range);
  return {f, K};
}

template <typename Orbit>
typename Orbit::State sample_state(TrialRng& rng, const CheckSpec& spec) {
  const double a = rng.uniform(spec.state_range);
  const double b = rng.uniform(spec.state_range);
  return detail::from_chart<typename Orbit::State>({a, b});
}

inline ProductState sample_product_state(TrialRng& rng,
                                         const CheckSpec& spec) {
  const double p1 = rng.uniform(spec.state_range);
  const double q1 = rng.uniform(spec.state_range);
  const double p2 = rng.uniform(spec.state_range);
  const double q2 = rng.uniform(spec.state_range);
  return {p1, q1, p2, q2};
}

inline BarycenterState sample_barycenter_state(TrialRng& rng,
                                               const CheckSpec& spec) {
  const double p = rng.uniform(spec.state_range);
  const double q = rng.uniform(spec.state_range);
  const double pi = rng.uniform(spec.state_range);
  const double rho = rng.uniform(spec.state_range);
  return {p, q, pi, rho};
}

inline BarycenterGroupElement sample_barycenter_element(
    TrialRng& rng, const CheckSpec& spec) {
  const double x = rng.uniform(spec.group_range);
  const double t = rng.uniform(spec.group_range);
  const double v = rng.uniform(spec.group_range);
  const double r = rng.uniform(spec.group_range);
  const double u = rng.uniform(spec.group_range);
  return {x, t, v, r, u};
}

// --- Residuals --------------------------------------------------------------
//
// Each residual is |difference| / max(1, scale), where the scale gathers the
// magnitudes of the inputs and of the values actually compared. This keeps
// one tolerance meaningful whether a trial lands at O(1) or at O(1e4) (the
// extreme mass-ratio regime).

inline double associativity_residual(const GroupElement& g,
                                     const GroupElement& h,
                                     const GroupElement& k) {
  const GroupElement left = compose(compose(g, h), k);
  const GroupElement right = compose(g, compose(h, k));
  const double scale =
      detail::max_abs({g.x, g.t, g.v, h.x, h.t, h.v, k.x, k.t, k.v, left.x,
                       left.t, left.v});
  return detail::max_abs(
             {left.x - right.x, left.t - right.t, left.v - right.v}) /
         std::max(1.0, scale);
}

inline double identity_inverse_residual(const GroupElement& g) {
  const GroupElement gi = compose(g, inverse(g));
  const GroupElement ig = compose(inverse(g), g);
  const GroupElement le = compose(GroupElement::identity(), g);
  const GroupElement re = compose(g, GroupElement::identity());
  const double scale = detail::max_abs({g.x, g.t, g.v});
  return detail::max_abs({gi.x, gi.t, gi.v, ig.x, ig.t, ig.v, le.x - g.x,
                          le.t - g.t, le.v - g.v, re.x - g.x, re.t - g.t,
                          re.v - g.v}) /
         std::max(1.0, scale);
}

template <typename Orbit>
double homomorphism_residual(const Orbit& orbit, const GroupElement& g,
                             const GroupElement& h,
                             const typename Orbit::State& s) {
  const auto once = detail::chart(act(orbit, compose(g, h), s));
  const auto twice = detail::chart(act(orbit, g, act(orbit, h, s)));
  const auto s0 = detail::chart(s);
  const double scale =
      detail::max_abs({g.x, g.t, g.v, h.x, h.t, h.v, s0[0], s0[1], once[0],
                       once[1], twice[0], twice[1]});
  return detail::max_abs({once[0] - twice[0], once[1] - twice[1]}) /
         std::max(1.0, scale);
}

namespace detail {

// Linear part of an (affine) orbit action, from images of scaled basis
// states. The power-of-two probe makes the final divisions exact and keeps
// the subtraction round-off well below the exact-algebra tolerance.
template <typename Orbit>
std::array<std::array<double, 2>, 2> action_linear_part(
    const Orbit& orbit, const GroupElement& g) {
  using State = typename Orbit::State;
  constexpr double kProbe = 64.0;
  const std::array<double, 2> base =
      chart(act(orbit, g, from_chart<State>({0.0, 0.0})));
  std::array<std::array<double, 2>, 2> a{};
  for (int j = 0; j < 2; ++j) {
    std::array<double, 2> probe{0.0, 0.0};
    probe[j] = kProbe;
    const std::array<double, 2> image =
        chart(act(orbit, g, from_chart<State>(probe)));
    a[0][j] = (image[0] - base[0]) / kProbe;
    a[1][j] = (image[1] - base[1]) / kProbe;
  }
  return a;
}

}  // namespace detail

// A^T S A = S for the linear part A of the action of g, with S the chart's
// symplectic form on basis tangents.
template <typename Orbit>
double symplectic_residual(const Orbit& orbit, const GroupElement& g) {
  using Tangent = typename Orbit::Tangent;
  const auto a = detail::action_linear_part(orbit, g);

  std::array<std::array<double, 2>, 2> s{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      std::array<double, 2> ei{0.0, 0.0};
      std::array<double, 2> ej{0.0, 0.0};
      ei[i] = 1.0;
      ej[j] = 1.0;
      s[i][j] = symplectic_pairing(orbit, detail::from_chart<Tangent>(ei),
                                   detail::from_chart<Tangent>(ej));
    }
  }

  double diff = 0.0;
  double scale = detail::max_abs({g.x, g.t, g.v});
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double t_ij = 0.0;
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          t_ij += a[k][i] * s[k][l] * a[l][j];
        }
      }
      diff = std::max(diff, std::abs(t_ij - s[i][j]));
      scale = detail::max_abs({scale, a[i][j], s[i][j]});
    }
  }
  return diff / std::max(1.0, scale);
}

// hamiltonian_field against the central difference of the one-parameter
// action; the minus sign is the pinned generator convention.
template <typename Orbit>
double flow_generator_residual(const Orbit& orbit, Generator X,
                               const typename Orbit::State& s) {
  const auto s0 = detail::chart(s);
  const double h = kFdStep * std::max(1.0, detail::max_abs({s0[0], s0[1]}));
  const auto forward = detail::chart(act(orbit, exp_generator(X, h), s));
  const auto backward = detail::chart(act(orbit, exp_generator(X, -h), s));
  const auto field = detail::chart(hamiltonian_field(orbit, X, s));
  const double fd0 = -(forward[0] - backward[0]) / (2.0 * h);
  const double fd1 = -(forward[1] - backward[1]) / (2.0 * h);
  const double scale =
      detail::max_abs({s0[0], s0[1], field[0], field[1]});
  return detail::max_abs({fd0 - field[0], fd1 - field[1]}) /
         std::max(1.0, scale);
}

// Gradient of the momentum component of X against the contraction of the
// Hamiltonian field of X with the symplectic form.
template <typename Orbit>
double momentum_gradient_residual(const Orbit& orbit, Generator X,
                                  const typename Orbit::State& s) {
  using State = typename Orbit::State;
  using Tangent = typename Orbit::Tangent;
  const auto s0 = detail::chart(s);
  const double h = kFdStep * std::max(1.0, detail::max_abs({s0[0], s0[1]}));
  const Tangent field = hamiltonian_field(orbit, X, s);

  double diff = 0.0;
  double scale = detail::max_abs({s0[0], s0[1]});
  for (int i = 0; i < 2; ++i) {
    std::array<double, 2> plus = s0;
    std::array<double, 2> minus = s0;
    plus[i] += h;
    minus[i] -= h;
    const double span = plus[i] - minus[i];  // the step actually taken
    const double jp =
        component(momentum(orbit, detail::from_chart<State>(plus)), X);
    const double jm =
        component(momentum(orbit, detail::from_chart<State>(minus)), X);
    const double gradient = (jp - jm) / span;

    std::array<double, 2> e{0.0, 0.0};
    e[i] = 1.0;
    const double expected =
        symplectic_pairing(orbit, field, detail::from_chart<Tangent>(e));
    diff = std::max(diff, std::abs(gradient - expected));
    scale = detail::max_abs({scale, gradient, expected});
  }
  return diff / std::max(1.0, scale);
}

// The Casimir is unchanged by the action and recovers the orbit label.
template <typename Orbit>
double casimir_residual(const Orbit& orbit, const GroupElement& g,
                        const typename Orbit::State& s) {
  const Momentum before = momentum(orbit, s);
  const Momentum after = momentum(orbit, act(orbit, g, s));
  const double c_before = casimir(orbit, before);
  const double c_after = casimir(orbit, after);
  const double label = invariant_label(orbit);
  const auto s0 = detail::chart(s);
  const double scale = detail::max_abs(
      {g.x, g.t, g.v, s0[0], s0[1], before.jK, before.jP, before.jE, after.jK,
       after.jP, after.jE, label});
  return detail::max_abs({c_after - c_before, c_before - label}) /
         std::max(1.0, scale);
}

// The momentum component of X is unchanged along the flow of X itself.
template <typename Orbit>
double component_invariance_residual(const Orbit& orbit, Generator X,
                                     double flow_parameter,
                                     const typename Orbit::State& s) {
  const Momentum before = momentum(orbit, s);
  const Momentum after =
      momentum(orbit, act(orbit, exp_generator(X, flow_parameter), s));
  const auto s0 = detail::chart(s);
  const double scale = detail::max_abs(
      {flow_parameter, s0[0], s0[1], before.jK, before.jP, before.jE,
       after.jK, after.jP, after.jE});
  return std::abs(component(after, X) - component(before, X)) /
         std::max(1.0, scale);
}

// --- Two-body residuals -----------------------------------------------------

namespace detail {

using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat4 barycenter_matrix(const TwoBodySystem& sys) {
  Mat4 a{};
  for (int j = 0; j < 4; ++j) {
    std::array<double, 4> e{};
    e[j] = 1.0;
    const BarycenterState image =
        to_barycenter(sys, ProductState{e[0], e[1], e[2], e[3]});
    a[0][j] = image.p;
    a[1][j] = image.q;
    a[2][j] = image.pi;
    a[3][j] = image.rho;
  }
  return a;
}

// dp^dq + dpi^drho on basis vectors; the same block matrix represents
// dp1^dq1 + dp2^dq2 in the product chart.
inline Mat4 canonical_form4() {
  Mat4 s{};
  s[0][1] = 1.0;
  s[1][0] = -1.0;
  s[2][3] = 1.0;
  s[3][2] = -1.0;
  return s;
}

inline Mat4 congruence(const Mat4& a, const Mat4& s) {
  Mat4 sa{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += s[i][k] * a[k][j];
      sa[i][j] = acc;
    }
  }
  Mat4 out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += a[k][i] * sa[k][j];
      out[i][j] = acc;
    }
  }
  return out;
}

}  // namespace detail

inline double barycenter_roundtrip_residual(const TwoBodySystem& sys,
                                            const ProductState& s) {
  const BarycenterState b = to_barycenter(sys, s);
  const ProductState back = from_barycenter(sys, b);
  const double scale = detail::max_abs(
      {s.p1, s.q1, s.p2, s.q2, b.p, b.q, b.pi, b.rho});
  return detail::max_abs({back.p1 - s.p1, back.q1 - s.q1, back.p2 - s.p2,
                          back.q2 - s.q2}) /
         std::max(1.0, scale);
}

// The barycenter map preserves the canonical form (A^T O A = O for its 4x4
// matrix) and round-trips exactly with its inverse.
inline double barycenter_canonical_residual(const TwoBodySystem& sys,
                                            const ProductState& s) {
  const detail::Mat4 a = detail::barycenter_matrix(sys);
  const detail::Mat4 omega = detail::canonical_form4();
  const detail::Mat4 t = detail::congruence(a, omega);
  double diff = 0.0;
  double scale = detail::max_abs({sys.m1, sys.m2});
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      diff = std::max(diff, std::abs(t[i][j] - omega[i][j]));
      scale = std::max(scale, std::abs(a[i][j]));
    }
  }
  return std::max(diff / std::max(1.0, scale),
                  barycenter_roundtrip_residual(sys, s));
}

// Reduced-coordinate action vs. the product action conjugated by the
// barycenter change of variables.
inline double conjugation_residual(const TwoBodySystem& sys,
                                   const BarycenterGroupElement& g,
                                   const BarycenterState& b) {
  const BarycenterState direct = barycentric_act(sys, g, b);
  const auto pair = to_particle_pair(sys, g);
  const BarycenterState via = to_barycenter(
      sys, product_act(sys, pair.first, pair.second, from_barycenter(sys, b)));
  const double scale = detail::max_abs(
      {g.x, g.t, g.v, g.r, g.u, b.p, b.q, b.pi, b.rho, direct.p, direct.q,
       direct.pi, direct.rho});
  return detail::max_abs({direct.p - via.p, direct.q - via.q,
                          direct.pi - via.pi, direct.rho - via.rho}) /
         std::max(1.0, scale);
}

// Internal transformations fix the center-of-mass origin.
inline double stabilizer_residual(const TwoBodySystem& sys, double r, double t,
                                  double u, double pi, double rho) {
  const auto pair = internal_group_element(sys, r, t, u);
  const ProductState start =
      from_barycenter(sys, BarycenterState{0.0, 0.0, pi, rho});
  const BarycenterState end =
      to_barycenter(sys, product_act(sys, pair.first, pair.second, start));
  const double scale = detail::max_abs({r, t, u, pi, rho, end.pi, end.rho});
  return detail::max_abs({end.p, end.q}) / std::max(1.0, scale);
}

// Finite differences along the closed-form flow: dq/dt = p/m, dp/dt = f,
// d2q/dt2 = f/m, and the relative-coordinate analogues.
inline double motion_equations_residual(const TwoBodySystem& sys,
                                        const BarycenterState& b0, double t) {
  const DerivedParams d = derive_params(sys);
  const double h1 = kFdStep * std::max(1.0, std::abs(t));
  const double h2 = kFdSecondStep * std::max(1.0, std::abs(t));

  const BarycenterState center = evolve(sys, b0, t);
  const BarycenterState fwd1 = evolve(sys, b0, t + h1);
  const BarycenterState bck1 = evolve(sys, b0, t - h1);
  const BarycenterState fwd2 = evolve(sys, b0, t + h2);
  const BarycenterState bck2 = evolve(sys, b0, t - h2);
  const double span1 = (t + h1) - (t - h1);

  const double q_dot = (fwd1.q - bck1.q) / span1;
  const double rho_dot = (fwd1.rho - bck1.rho) / span1;
  const double p_dot = (fwd1.p - bck1.p) / span1;
  const double pi_dot = (fwd1.pi - bck1.pi) / span1;
  const double q_ddot = (fwd2.q - 2.0 * center.q + bck2.q) / (h2 * h2);
  const double rho_ddot = (fwd2.rho - 2.0 * center.rho + bck2.rho) / (h2 * h2);

  const double scale = detail::max_abs(
      {b0.p, b0.q, b0.pi, b0.rho, t, center.p, center.q, center.pi, center.rho,
       center.p / d.m, center.pi / d.mu, d.f / d.m, d.phi / d.mu, d.f, d.phi});
  return detail::max_abs({q_dot - center.p / d.m, rho_dot - center.pi / d.mu,
                          p_dot - d.f, pi_dot - d.phi, q_ddot - d.f / d.m,
                          rho_ddot - d.phi / d.mu}) /
         std::max(1.0, scale);
}

inline double energy_conservation_residual(const TwoBodySystem& sys,
                                           const BarycenterState& b,
                                           double t) {
  const EnergySplit before = energy(sys, b);
  const EnergySplit after = energy(sys, evolve(sys, b, t));
  const double scale =
      detail::max_abs({before.kinetic, before.potential, after.kinetic,
                       after.potential, t});
  return std::abs(after.total() - before.total()) / std::max(1.0, scale);
}

// pi/mu equals the relative velocity p1/m1 - p2/m2 of the particle pair.
inline double relative_kinematics_residual(const TwoBodySystem& sys,
                                           const BarycenterState& b) {
  const DerivedParams d = derive_params(sys);
  const ProductState s = from_barycenter(sys, b);
  const double lhs = b.pi / d.mu;
  const double rhs = s.p1 / sys.m1 - s.p2 / sys.m2;
  const double scale = detail::max_abs({b.p, b.pi, lhs, rhs});
  return std::abs(lhs - rhs) / std::max(1.0, scale);
}

// Isolated systems: p is constant and q advances by (p/m) * dt.
inline double straight_line_residual(const TwoBodySystem& sys,
                                     const BarycenterState& b0, double t,
                                     double dt) {
  const DerivedParams d = derive_params(sys);
  const BarycenterState at = evolve(sys, b0, t);
  const BarycenterState later = evolve(sys, b0, t + dt);
  const double expected_step = (b0.p / d.m) * dt;
  const double scale = detail::max_abs(
      {b0.p, b0.q, t, dt, at.q, later.q, expected_step});
  return detail::max_abs({at.p - b0.p, later.p - b0.p,
                          (later.q - at.q) - expected_step}) /
         std::max(1.0, scale);
}

// When f1 = -f2 the relative force equals either applied force.
inline double phi_f1_residual(const TwoBodySystem& sys) {
  const DerivedParams d = derive_params(sys);
  const double scale = detail::max_abs({sys.f1, sys.f2, d.phi});
  return detail::max_abs({d.phi - sys.f1, d.phi + sys.f2}) /
         std::max(1.0, scale);
}

// --- Checks -----------------------------------------------------------------

inline CheckRecord check_group_associativity(const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const GroupElement g = sample_group_element(rng, spec);
    const GroupElement h = sample_group_element(rng, spec);
    const GroupElement k = sample_group_element(rng, spec);
    tracker.update(associativity_residual(g, h, k), [&] {
      return detail::describe(g, "g") + " " + detail::describe(h, "h") + " " +
             detail::describe(k, "k");
    });
  });
}

inline CheckRecord check_group_identity_inverse(const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const GroupElement g = sample_group_element(rng, spec);
    tracker.update(identity_inverse_residual(g),
                   [&] { return detail::describe(g, "g"); });
  });
}

template <typename Orbit>
CheckRecord check_action_homomorphism(const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const Orbit orbit = sample_orbit<Orbit>(rng, spec);
    const GroupElement g = sample_group_element(rng, spec);
    const GroupElement h = sample_group_element(rng, spec);
    const auto s = sample_state<Orbit>(rng, spec);
    const auto s0 = detail::chart(s);
    tracker.update(homomorphism_residual(orbit, g, h, s), [&] {
      return detail::describe(orbit) + " " + detail::describe(g, "g") + " " +
             detail::describe(h, "h") + " " +
             detail::describe("s", {s0[0], s0[1]});
    });
  });
}

template <typename Orbit>
CheckRecord check_action_symplectic(const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const Orbit orbit = sample_orbit<Orbit>(rng, spec);
    const GroupElement g = sample_group_element(rng, spec);
    tracker.update(symplectic_residual(orbit, g), [&] {
      return detail::describe(orbit) + " " + detail::describe(g, "g");
    });
  });
}

template <typename Orbit>
CheckRecord check_flow_generator(const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const Orbit orbit = sample_orbit<Orbit>(rng, spec);
    const auto s = sample_state<Orbit>(rng, spec);
    const auto s0 = detail::chart(s);
    for (Generator X : {Generator::Boost, Generator::SpaceTranslation,
                        Generator::TimeTranslation}) {
      tracker.update(flow_generator_residual(orbit, X, s), [&] {
        return detail::describe(orbit) + " X=" + detail::generator_name(X) +
               " " + detail::describe("s", {s0[0], s0[1]});
      });
    }
  });
}

template <typename Orbit>
CheckRecord check_momentum_gradient(const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const Orbit orbit = sample_orbit<Orbit>(rng, spec);
    const auto s = sample_state<Orbit>(rng, spec);
    const auto s0 = detail::chart(s);
    for (Generator X : {Generator::Boost, Generator::SpaceTranslation,
                        Generator::TimeTranslation}) {
      tracker.update(momentum_gradient_residual(orbit, X, s), [&] {
        return detail::describe(orbit) + " X=" + detail::generator_name(X) +
               " " + detail::describe("s", {s0[0], s0[1]});
      });
    }
  });
}

template <typename Orbit>
CheckRecord check_casimir_invariance(const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const Orbit orbit = sample_orbit<Orbit>(rng, spec);
    const GroupElement g = sample_group_element(rng, spec);
    const auto s = sample_state<Orbit>(rng, spec);
    const auto s0 = detail::chart(s);
    tracker.update(casimir_residual(orbit, g, s), [&] {
      return detail::describe(orbit) + " " + detail::describe(g, "g") + " " +
             detail::describe("s", {s0[0], s0[1]});
    });
  });
}

// Momentum components that their own flows leave fixed; the caller names
// which generators qualify for the orbit kind.
template <typename Orbit>
CheckRecord check_component_invariance(
    const CheckSpec& spec, const std::vector<Generator>& generators) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const Orbit orbit = sample_orbit<Orbit>(rng, spec);
    const auto s = sample_state<Orbit>(rng, spec);
    const auto s0 = detail::chart(s);
    for (Generator X : generators) {
      const double flow_parameter = rng.uniform(spec.group_range);
      tracker.update(component_invariance_residual(orbit, X, flow_parameter, s),
                     [&] {
                       return detail::describe(orbit) +
                              " X=" + detail::generator_name(X) + " s=" +
                              format_double(flow_parameter) + " " +
                              detail::describe("state", {s0[0], s0[1]});
                     });
    }
  });
}

inline CheckRecord check_barycenter_canonical(const TwoBodySystem& sys,
                                              const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const ProductState s = sample_product_state(rng, spec);
    tracker.update(barycenter_canonical_residual(sys, s), [&] {
      return detail::describe("s", {s.p1, s.q1, s.p2, s.q2});
    });
  });
}

inline CheckRecord check_conjugation(const TwoBodySystem& sys,
                                     const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const BarycenterGroupElement g = sample_barycenter_element(rng, spec);
    const BarycenterState b = sample_barycenter_state(rng, spec);
    tracker.update(conjugation_residual(sys, g, b), [&] {
      return detail::describe("g", {g.x, g.t, g.v, g.r, g.u}) + " " +
             detail::describe("b", {b.p, b.q, b.pi, b.rho});
    });
  });
}

inline CheckRecord check_stabilizer(const TwoBodySystem& sys,
                                    const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const double r = rng.uniform(spec.group_range);
    const double t = rng.uniform(spec.group_range);
    const double u = rng.uniform(spec.group_range);
    const double pi = rng.uniform(spec.state_range);
    const double rho = rng.uniform(spec.state_range);
    tracker.update(stabilizer_residual(sys, r, t, u, pi, rho), [&] {
      return detail::describe("rtu", {r, t, u}) + " " +
             detail::describe("rel", {pi, rho});
    });
  });
}

inline CheckRecord check_motion_equations(const TwoBodySystem& sys,
                                          const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const BarycenterState b0 = sample_barycenter_state(rng, spec);
    const double t = rng.uniform(spec.group_range);
    tracker.update(motion_equations_residual(sys, b0, t), [&] {
      return detail::describe("b0", {b0.p, b0.q, b0.pi, b0.rho}) +
             " t=" + format_double(t);
    });
  });
}

inline CheckRecord check_energy_conservation(const TwoBodySystem& sys,
                                             const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const BarycenterState b = sample_barycenter_state(rng, spec);
    const double t = rng.uniform(spec.group_range);
    tracker.update(energy_conservation_residual(sys, b, t), [&] {
      return detail::describe("b", {b.p, b.q, b.pi, b.rho}) +
             " t=" + format_double(t);
    });
  });
}

inline CheckRecord check_relative_kinematics(const TwoBodySystem& sys,
                                             const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const BarycenterState b = sample_barycenter_state(rng, spec);
    tracker.update(relative_kinematics_residual(sys, b), [&] {
      return detail::describe("b", {b.p, b.q, b.pi, b.rho});
    });
  });
}

inline CheckRecord check_straight_line(const TwoBodySystem& sys,
                                       const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng& rng, ResidualTracker& tracker) {
    const BarycenterState b0 = sample_barycenter_state(rng, spec);
    const double t = rng.uniform(spec.group_range);
    const double dt = rng.uniform(spec.group_range);
    tracker.update(straight_line_residual(sys, b0, t, dt), [&] {
      return detail::describe("b0", {b0.p, b0.q, b0.pi, b0.rho}) +
             " t=" + format_double(t) + " dt=" + format_double(dt);
    });
  });
}

inline CheckRecord check_phi_equals_f1(const TwoBodySystem& sys,
                                       const CheckSpec& spec) {
  return run_check(spec, [&](TrialRng&, ResidualTracker& tracker) {
    tracker.update(phi_f1_residual(sys), [&] {
      return detail::describe("f", {sys.f1, sys.f2});
    });
  });
}

// All two-body identities for one system. spec.name prefixes the sub-check
// names and spec.tolerance bounds the exact-algebra sub-checks; the looser
// classes use the module constants unless tolerance_override is given. The
// straight-line and relative-force laws only apply to isolated systems and
// are skipped otherwise.
inline VerificationReport check_twobody_suite(
    const TwoBodySystem& sys, const CheckSpec& spec,
    std::optional<double> tolerance_override = std::nullopt) {
  spec.validate();
  const auto sub = [&](const char* name, double pinned) {
    CheckSpec s = spec;
    s.name = spec.name + "." + name;
    s.tolerance = tolerance_override ? *tolerance_override : pinned;
    return s;
  };

  VerificationReport report;
  report.records.push_back(check_barycenter_canonical(
      sys, sub("barycenter_canonical", spec.tolerance)));
  report.records.push_back(check_conjugation(sys, sub("conjugation",
                                                      kActionTol)));
  report.records.push_back(check_stabilizer(sys, sub("stabilizer",
                                                     kActionTol)));
  report.records.push_back(
      check_motion_equations(sys, sub("motion_equations", kFiniteDiffTol)));
  report.records.push_back(
      check_energy_conservation(sys, sub("energy_conservation", kActionTol)));
  report.records.push_back(check_relative_kinematics(
      sys, sub("relative_kinematics", spec.tolerance)));
  if (is_isolated(derive_params(sys), default_isolation_tolerance(sys))) {
    report.records.push_back(
        check_straight_line(sys, sub("straight_line", spec.tolerance)));
    report.records.push_back(
        check_phi_equals_f1(sys, sub("phi_equals_f1", spec.tolerance)));
  }
  return report;
}

namespace detail {

template <typename Orbit>
void append_orbit_checks(VerificationReport& report, const std::string& prefix,
                         const std::vector<Generator>& invariant_components,
                         std::uint64_t seed, std::uint64_t trials,
                         std::optional<double> tolerance_override) {
  const auto spec = [&](const char* name, double pinned) {
    CheckSpec s;
    s.name = prefix + "." + name;
    s.trials = trials;
    s.seed = seed;
    s.tolerance = tolerance_override ? *tolerance_override : pinned;
    return s;
  };
  report.records.push_back(
      check_action_homomorphism<Orbit>(spec("action_homomorphism",
                                            kActionTol)));
  report.records.push_back(
      check_action_symplectic<Orbit>(spec("action_symplectic", kExactTol)));
  report.records.push_back(
      check_flow_generator<Orbit>(spec("flow_generator", kFiniteDiffTol)));
  report.records.push_back(
      check_momentum_gradient<Orbit>(spec("momentum_gradient",
                                          kFiniteDiffTol)));
  report.records.push_back(
      check_casimir_invariance<Orbit>(spec("casimir_invariance", kActionTol)));
  report.records.push_back(check_component_invariance<Orbit>(
      spec("component_invariance", kExactTol), invariant_components));
}

}  // namespace detail

// The full suite: every identity of the group, orbit and two-body modules,
// the orbit checks over randomized orbits and the two-body checks over a
// fixed panel of regimes (isolated, driven, equal masses, 1:1000 mass
// ratio). Deterministic given (seed, trials).
inline VerificationReport run_all(
    std::uint64_t seed = kDefaultSeed, std::uint64_t trials = kDefaultTrials,
    std::optional<double> tolerance_override = std::nullopt) {
  const auto spec = [&](const char* name, double pinned) {
    CheckSpec s;
    s.name = name;
    s.trials = trials;
    s.seed = seed;
    s.tolerance = tolerance_override ? *tolerance_override : pinned;
    return s;
  };

  VerificationReport report;
  report.records.push_back(
      check_group_associativity(spec("group.associativity", kExactTol)));
  report.records.push_back(
      check_group_identity_inverse(spec("group.identity_inverse", kExactTol)));

  const std::vector<Generator> all_generators{Generator::Boost,
                                              Generator::SpaceTranslation,
                                              Generator::TimeTranslation};
  // jP survives its own flow in every chart; jK and jE do so only on the
  // massive orbits.
  const std::vector<Generator> translation_only{Generator::SpaceTranslation};
  detail::append_orbit_checks<ForcedMassiveOrbit>(
      report, "orbits.forced", all_generators, seed, trials,
      tolerance_override);
  detail::append_orbit_checks<FreeMassiveOrbit>(
      report, "orbits.free", all_generators, seed, trials, tolerance_override);
  detail::append_orbit_checks<SpacetimeOrbit>(
      report, "orbits.spacetime", translation_only, seed, trials,
      tolerance_override);

  const auto merge = [&](VerificationReport sub) {
    for (CheckRecord& r : sub.records) {
      report.records.push_back(std::move(r));
    }
  };
  merge(check_twobody_suite(TwoBodySystem{1.0, 3.0, 2.0, -2.0},
                            spec("twobody.isolated", kExactTol),
                            tolerance_override));
  merge(check_twobody_suite(TwoBodySystem{1.0, 3.0, 1.0, 3.0},
                            spec("twobody.nonisolated", kExactTol),
                            tolerance_override));
  merge(check_twobody_suite(TwoBodySystem{2.0, 2.0, 1.0, 3.0},
                            spec("twobody.equal_mass", kExactTol),
                            tolerance_override));
  merge(check_twobody_suite(TwoBodySystem{0.01, 10.0, 1.0, -0.5},
                            spec("twobody.mass_ratio_1000", kExactTol),
                            tolerance_override));
  return report;
}

}  // namespace galilei
