#pragma once

namespace galilei {

// One Galilei transformation of 1+1-dimensional spacetime: a space shift x,
// a time shift t and a boost with velocity v. Fields are plain reals; the
// group is all of R^3 under the product below, so no normalization is ever
// needed. Callers are responsible for keeping the fields finite.
struct GroupElement {
  double x = 0.0;
  double t = 0.0;
  double v = 0.0;

  static constexpr GroupElement identity() { return {0.0, 0.0, 0.0}; }
};

// The three generators of the group: boosts K, space translations P and
// time translations E.
enum class Generator { Boost, SpaceTranslation, TimeTranslation };

// Group product, fixed by requiring that the spacetime point action
//   (tau, q) -> (tau + t, q + v*tau + x)
// be a left action. Substituting h then g gives
//   tau -> tau + h.t + g.t
//   q   -> q + (g.v + h.v)*tau + (g.x + h.x + g.v*h.t)
// which forces the law below. The same product makes the massive-particle
// actions left actions as well (cross-checked in the verification suite).
constexpr GroupElement compose(const GroupElement& g, const GroupElement& h) {
  return {g.x + h.x + g.v * h.t, g.t + h.t, g.v + h.v};
}

// Two-sided inverse for the product above.
constexpr GroupElement inverse(const GroupElement& g) {
  return {-g.x + g.v * g.t, -g.t, -g.v};
}

// One-parameter subgroup of a single generator at parameter s.
constexpr GroupElement exp_generator(Generator kind, double s) {
  switch (kind) {
    case Generator::Boost:
      return {0.0, 0.0, s};
    case Generator::SpaceTranslation:
      return {s, 0.0, 0.0};
    case Generator::TimeTranslation:
      return {0.0, s, 0.0};
  }
  return {};
}

}  // namespace galilei
