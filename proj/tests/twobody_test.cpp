#include "galilei/twobody.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "galilei/group.hpp"
#include "galilei/orbits.hpp"

namespace {

using galilei::BarycenterGroupElement;
using galilei::BarycenterState;
using galilei::barycentric_act;
using galilei::compose;
using galilei::default_isolation_tolerance;
using galilei::derive_params;
using galilei::DerivedParams;
using galilei::energy;
using galilei::evolve;
using galilei::from_barycenter;
using galilei::GroupElement;
using galilei::internal_group_element;
using galilei::is_isolated;
using galilei::momenta;
using galilei::product_act;
using galilei::ProductState;
using galilei::to_barycenter;
using galilei::to_barycentric;
using galilei::to_particle_pair;
using galilei::trajectory;
using galilei::TrajectorySample;
using galilei::TwoBodyMomentum;
using galilei::TwoBodySystem;

const TwoBodySystem kIsolated{1.0, 3.0, 2.0, -2.0};
const TwoBodySystem kDriven{1.0, 3.0, 1.0, 3.0};
const ProductState kState{2.0, 4.0, 2.0, 0.0};

TEST(TwoBody, DerivedParamsMatchHandComputation) {
  const DerivedParams d = derive_params(kIsolated);
  EXPECT_DOUBLE_EQ(d.m, 4.0);
  EXPECT_DOUBLE_EQ(d.mu, 0.75);
  EXPECT_DOUBLE_EQ(d.f, 0.0);
  EXPECT_DOUBLE_EQ(d.phi, 2.0);

  const DerivedParams e = derive_params({2.0, 2.0, 1.0, 3.0});
  EXPECT_DOUBLE_EQ(e.m, 4.0);
  EXPECT_DOUBLE_EQ(e.mu, 1.0);
  EXPECT_DOUBLE_EQ(e.f, 4.0);
  EXPECT_DOUBLE_EQ(e.phi, -1.0);
}

TEST(TwoBody, BarycenterMapMatchesHandComputation) {
  const BarycenterState b = to_barycenter(kIsolated, kState);
  EXPECT_DOUBLE_EQ(b.p, 4.0);
  EXPECT_DOUBLE_EQ(b.q, 1.0);
  EXPECT_DOUBLE_EQ(b.pi, 1.0);
  EXPECT_DOUBLE_EQ(b.rho, 4.0);
}

TEST(TwoBody, BarycenterMapRoundTripsExactly) {
  const ProductState back =
      from_barycenter(kIsolated, to_barycenter(kIsolated, kState));
  EXPECT_DOUBLE_EQ(back.p1, kState.p1);
  EXPECT_DOUBLE_EQ(back.q1, kState.q1);
  EXPECT_DOUBLE_EQ(back.p2, kState.p2);
  EXPECT_DOUBLE_EQ(back.q2, kState.q2);
}

TEST(TwoBody, ProductActionMatchesPerParticleHandComputation) {
  const GroupElement g{0.0, 1.0, 0.0};
  const ProductState s = product_act(kIsolated, g, g, kState);
  EXPECT_DOUBLE_EQ(s.p1, 4.0);
  EXPECT_DOUBLE_EQ(s.q1, 7.0);
  EXPECT_DOUBLE_EQ(s.p2, 0.0);
  EXPECT_NEAR(s.q2, 1.0 / 3.0, 1e-15);
}

TEST(TwoBody, BarycentricActionMatchesHandComputation) {
  // m = 4, f = 4, mu = 0.75, phi = 2.
  const TwoBodySystem sys{1.0, 3.0, 3.0, 1.0};
  const BarycenterState b =
      barycentric_act(sys, {0.0, 1.0, 0.0, 0.0, 0.0}, BarycenterState{});
  EXPECT_DOUBLE_EQ(b.p, 4.0);
  EXPECT_DOUBLE_EQ(b.q, 0.5);
  EXPECT_DOUBLE_EQ(b.pi, 2.0);
  EXPECT_NEAR(b.rho, 4.0 / 3.0, 1e-15);
}

TEST(TwoBody, BarycentricRouteAgreesWithProductRoute) {
  const GroupElement g{0.0, 1.0, 0.0};
  const BarycenterState via_product =
      to_barycenter(kIsolated, product_act(kIsolated, g, g, kState));
  const BarycenterState via_reduced = barycentric_act(
      kIsolated, {g.x, g.t, g.v, 0.0, 0.0}, to_barycenter(kIsolated, kState));
  EXPECT_NEAR(via_product.p, via_reduced.p, 1e-15);
  EXPECT_NEAR(via_product.q, via_reduced.q, 1e-15);
  EXPECT_NEAR(via_product.pi, via_reduced.pi, 1e-15);
  EXPECT_NEAR(via_product.rho, via_reduced.rho, 1e-14);
}

TEST(TwoBody, ParticlePairMatchesHandComputation) {
  const BarycenterGroupElement gb{1.0, 2.0, 0.5, 4.0, 8.0};
  const auto [g1, g2] = to_particle_pair(kIsolated, gb);
  EXPECT_DOUBLE_EQ(g1.x, 4.0);    // x + (m2/m) r
  EXPECT_DOUBLE_EQ(g1.t, 2.0);
  EXPECT_DOUBLE_EQ(g1.v, 6.5);    // v + (m2/m) u
  EXPECT_DOUBLE_EQ(g2.x, 0.0);    // x - (m1/m) r
  EXPECT_DOUBLE_EQ(g2.t, 2.0);
  EXPECT_DOUBLE_EQ(g2.v, -1.5);   // v - (m1/m) u
}

TEST(TwoBody, BarycentricCoordinatesRoundTripParticlePairs) {
  const BarycenterGroupElement gb{1.0, 2.0, 0.5, 4.0, 8.0};
  const auto [g1, g2] = to_particle_pair(kIsolated, gb);
  const BarycenterGroupElement back = to_barycentric(kIsolated, g1, g2);
  EXPECT_DOUBLE_EQ(back.x, gb.x);
  EXPECT_DOUBLE_EQ(back.t, gb.t);
  EXPECT_DOUBLE_EQ(back.v, gb.v);
  EXPECT_DOUBLE_EQ(back.r, gb.r);
  EXPECT_DOUBLE_EQ(back.u, gb.u);
}

TEST(TwoBody, BarycentricCoordinatesRejectMismatchedTimeShifts) {
  EXPECT_THROW(
      to_barycentric(kIsolated, {0.0, 1.0, 0.0}, {0.0, 2.0, 0.0}),
      std::invalid_argument);
}

TEST(TwoBody, InternalElementMatchesHandComputation) {
  const auto [g1, g2] = internal_group_element(kDriven, 4.0, 2.0, 8.0);
  EXPECT_DOUBLE_EQ(g1.x, 5.0);    // (f/m) t^2/2 + (m2/m) r
  EXPECT_DOUBLE_EQ(g1.t, 2.0);
  EXPECT_DOUBLE_EQ(g1.v, 8.0);    // (f/m) t + (m2/m) u
  EXPECT_DOUBLE_EQ(g2.x, 1.0);
  EXPECT_DOUBLE_EQ(g2.t, 2.0);
  EXPECT_DOUBLE_EQ(g2.v, 0.0);
}

TEST(TwoBody, InternalElementDropsDriftWhenIsolated) {
  const auto [g1, g2] = internal_group_element(kIsolated, 4.0, 2.0, 8.0);
  EXPECT_DOUBLE_EQ(g1.x, 3.0);
  EXPECT_DOUBLE_EQ(g1.v, 6.0);
  EXPECT_DOUBLE_EQ(g2.x, -1.0);
  EXPECT_DOUBLE_EQ(g2.v, -2.0);
  EXPECT_DOUBLE_EQ(g1.t, 2.0);
  EXPECT_DOUBLE_EQ(g2.t, 2.0);
}

TEST(TwoBody, InternalElementFixesTheBarycenter) {
  // Transporting both particles by the internal pair moves pi and rho but
  // leaves p and q in place.
  const BarycenterState b0 = to_barycenter(kDriven, kState);
  const auto [g1, g2] = internal_group_element(kDriven, 1.5, 0.0, -2.0);
  const BarycenterState b1 =
      to_barycenter(kDriven, product_act(kDriven, g1, g2, kState));
  EXPECT_NEAR(b1.p, b0.p, 1e-12);
  EXPECT_NEAR(b1.q, b0.q, 1e-12);
}

TEST(TwoBody, MomentaMatchHandComputation) {
  const TwoBodyMomentum j =
      momenta(kIsolated, to_barycenter(kIsolated, kState));
  EXPECT_DOUBLE_EQ(j.jP_cm, 4.0);
  EXPECT_DOUBLE_EQ(j.jK_cm, 4.0);
  EXPECT_DOUBLE_EQ(j.jP_int, 1.0);
  EXPECT_DOUBLE_EQ(j.jK_int, 3.0);
  EXPECT_NEAR(j.jE, -16.0 / 3.0, 1e-14);
}

TEST(TwoBody, EnergySplitsMatchHandComputation) {
  const auto split = energy(kIsolated, {4.0, 1.0, 1.0, 4.0});
  EXPECT_NEAR(split.kinetic, 2.0 + 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(split.potential, -8.0);

  const auto driven = energy({2.0, 2.0, 1.0, 3.0}, {0.0, 2.0, 0.0, 3.0});
  EXPECT_DOUBLE_EQ(driven.kinetic, 0.0);
  EXPECT_DOUBLE_EQ(driven.potential, -5.0);
  EXPECT_DOUBLE_EQ(driven.total(), -5.0);
}

TEST(TwoBody, EvolutionConservesEnergy) {
  for (const TwoBodySystem& sys : {kIsolated, kDriven}) {
    const BarycenterState b0 = to_barycenter(sys, kState);
    const double e0 = energy(sys, b0).total();
    for (double t : {-7.5, -0.25, 0.5, 3.0, 10.0}) {
      const double et = energy(sys, evolve(sys, b0, t)).total();
      EXPECT_NEAR(et, e0, 1e-9 * std::max(1.0, std::abs(e0))) << "t=" << t;
    }
  }
}

TEST(TwoBody, EvolutionComposes) {
  const BarycenterState b0 = to_barycenter(kDriven, kState);
  const BarycenterState two_hops = evolve(kDriven, evolve(kDriven, b0, 1.5), 2.0);
  const BarycenterState one_hop = evolve(kDriven, b0, 3.5);
  EXPECT_NEAR(two_hops.p, one_hop.p, 1e-12);
  EXPECT_NEAR(two_hops.q, one_hop.q, 1e-12);
  EXPECT_NEAR(two_hops.pi, one_hop.pi, 1e-12);
  EXPECT_NEAR(two_hops.rho, one_hop.rho, 1e-12);
}

TEST(TwoBody, IsolatedEvolutionKeepsMomentumAndStaysAffine) {
  const BarycenterState b0 = to_barycenter(kIsolated, kState);
  for (double t : {-3.0, 0.125, 1.0, 7.5}) {
    const BarycenterState bt = evolve(kIsolated, b0, t);
    EXPECT_DOUBLE_EQ(bt.p, b0.p);
    EXPECT_DOUBLE_EQ(bt.q, b0.q + (b0.p / 4.0) * t);
  }
}

TEST(TwoBody, RelativeKinematicsIdentity) {
  const ProductState x{2.0, 4.0, -1.0, 0.5};
  const BarycenterState b = to_barycenter(kDriven, x);
  const DerivedParams d = derive_params(kDriven);
  EXPECT_NEAR(b.pi / d.mu, x.p1 / kDriven.m1 - x.p2 / kDriven.m2, 1e-15);
}

TEST(TwoBody, IsolationPredicate) {
  EXPECT_TRUE(is_isolated(derive_params(kIsolated),
                          default_isolation_tolerance(kIsolated)));
  EXPECT_FALSE(is_isolated(derive_params(kDriven),
                           default_isolation_tolerance(kDriven)));
  EXPECT_TRUE(is_isolated(DerivedParams{4.0, 0.75, 0.3, 2.0}, 0.5));
  EXPECT_THROW(is_isolated(derive_params(kIsolated), -1.0),
               std::invalid_argument);
}

TEST(TwoBody, TrajectorySamplingHitsEndpointsExactly) {
  const BarycenterState b0 = to_barycenter(kIsolated, kState);
  const std::vector<TrajectorySample> rows =
      trajectory(kIsolated, b0, 1.0, 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].t, 0.0);
  EXPECT_DOUBLE_EQ(rows[1].t, 1.0);
  EXPECT_DOUBLE_EQ(rows[0].state.q, 1.0);
  EXPECT_DOUBLE_EQ(rows[1].state.q, 2.0);
  EXPECT_DOUBLE_EQ(rows[1].state.pi, 3.0);
  EXPECT_DOUBLE_EQ(rows[1].momentum.jK_int, 5.0);
}

TEST(TwoBody, TrajectoryStaysOnTheAffineBarycenterLine) {
  const BarycenterState b0 = to_barycenter(kIsolated, kState);
  for (const TrajectorySample& row : trajectory(kIsolated, b0, 7.0, 64)) {
    EXPECT_DOUBLE_EQ(row.state.p, b0.p);
    EXPECT_NEAR(row.state.q, b0.q + (b0.p / 4.0) * row.t, 1e-9);
  }
}

TEST(TwoBody, TrajectoryRejectsNonPositiveStepCounts) {
  EXPECT_THROW(trajectory(kIsolated, BarycenterState{}, 1.0, 0),
               std::invalid_argument);
  EXPECT_THROW(trajectory(kIsolated, BarycenterState{}, 1.0, -3),
               std::invalid_argument);
}

TEST(TwoBody, RejectsNonPositiveMasses) {
  EXPECT_THROW(TwoBodySystem(0.0, 1.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(TwoBodySystem(1.0, -1.0, 0.0, 0.0), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(TwoBodySystem(1.0, 1.0, nan, 0.0), std::invalid_argument);
}

}  // namespace
