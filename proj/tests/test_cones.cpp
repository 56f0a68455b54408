#include "marp/cones.hpp"
#include "marp/sawtooth.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace marp;
using namespace marp::testing;

namespace {

constexpr double kPi = std::numbers::pi;

ClosedSet line(double angle, const Point& through) {
  Matrix d(2, 1);
  d << std::cos(angle), std::sin(angle);
  return ClosedSet::affine(through, d);
}

}  // namespace

TEST(Cone2D, Basics) {
  EXPECT_TRUE(Cone2D::zero().empty());
  EXPECT_TRUE(Cone2D::full().is_full());
  const Cone2D q = Cone2D::arc(0.0, kPi / 2);
  EXPECT_TRUE(q.contains(kPi / 4));
  EXPECT_FALSE(q.contains(kPi));
  EXPECT_TRUE(q.negated().contains(5 * kPi / 4));
}

TEST(Cone2D, MergeWrapsAroundZero) {
  Cone2D c = Cone2D::arc(1.5 * kPi, 0.1);
  c.merge(Cone2D::arc(0.05, 0.5));
  ASSERT_EQ(c.arcs().size(), 1u);
  EXPECT_NEAR(c.arcs()[0].len, 0.5 * kPi + 0.5, 1e-12);
}

TEST(Cone2D, ReflectionReversesOrientation) {
  Matrix flip(2, 2);
  flip << 1.0, 0.0, 0.0, -1.0;
  const Cone2D c = Cone2D::arc(0.1, 0.4).transformed(flip);
  EXPECT_TRUE(c.contains(normalize_angle(-0.2)));
  EXPECT_FALSE(c.contains(0.2));
}

TEST(ConeCosine, GapsAndOverlap) {
  EXPECT_NEAR(cone_cosine(Cone2D::ray(0.0), Cone2D::ray(kPi / 3)), 0.5, 1e-15);
  EXPECT_EQ(cone_cosine(Cone2D::ray(0.0), Cone2D::ray(kPi)), 0.0);
  EXPECT_EQ(cone_cosine(Cone2D::arc(0.0, 1.0), Cone2D::ray(0.5)), 1.0);
  EXPECT_EQ(cone_cosine(Cone2D::zero(), Cone2D::full()), 0.0);
  EXPECT_FALSE(min_gap(Cone2D::zero(), Cone2D::full()).has_value());
}

TEST(Features, BoxCornerCone) {
  const ClosedSet box = ClosedSet::box(pt({0, 0}), pt({1, 1}));
  const Cone2D c = local_pn_cone(box, pt({1, 1}));
  EXPECT_TRUE(c.contains(kPi / 4));
  EXPECT_FALSE(c.contains(kPi));
  EXPECT_TRUE(local_pn_cone(box, pt({0.5, 0.5})).empty());
}

TEST(Features, SawtoothValleyIsZeroAndPeakIsAnArc) {
  const ClosedSet a = ClosedSet::sawtooth(60);
  const auto l = sawtooth::landmarks(*a.as<Sawtooth2D>(), 2);
  EXPECT_TRUE(local_pn_cone(a, l.valley).empty());
  const Cone2D peak = local_pn_cone(a, l.s_k);
  EXPECT_TRUE(peak.contains(kPi / 2));
  EXPECT_GT(peak.arcs().front().len, 0.0);
}

TEST(Features, BallIsUnsupported) {
  EXPECT_THROW(boundary_features(ClosedSet::ball(pt({0, 0}), 1.0), pt({0, 0}), 1.0),
               std::domain_error);
}

TEST(RestrictedCone, PointRestriction) {
  const ClosedSet a = ClosedSet::half_space(pt({0, 1}), 0.0);
  const PnCone c = restricted_pn_cone(a, Restriction::points({pt({0, 2}), pt({1, -1})}), pt({0, 0}));
  const Cone2D& cone = std::get<Cone2D>(c);
  EXPECT_TRUE(cone.contains(kPi / 2));
  EXPECT_EQ(cone.arcs().size(), 1u);
}

TEST(RestrictedCone, RegionBlocksDirections) {
  // Upper normal of the lower half-plane is realised only if the region reaches above.
  const ClosedSet a = ClosedSet::half_space(pt({0, 1}), 0.0);
  const SetPtr below = share(ClosedSet::half_space(pt({0, 1}), -1.0));
  const SetPtr above = share(ClosedSet::half_space(pt({0, -1}), -1.0));  // y >= 1
  EXPECT_TRUE(std::get<Cone2D>(restricted_pn_cone(a, Restriction::region(below), pt({0, 0}))).empty());
  EXPECT_TRUE(std::get<Cone2D>(restricted_pn_cone(a, Restriction::region(above), pt({0, 0})))
                  .contains(kPi / 2));
}

TEST(RestrictedCone, HigherDimensionsSample) {
  Matrix e(3, 2);
  e << 1, 0, 0, 1, 0, 0;
  const ClosedSet plane = ClosedSet::affine(Point::Zero(3), e);
  const PnCone c = restricted_pn_cone(plane, Restriction::whole(), Point::Zero(3), {2000, 3});
  const auto& s = std::get<ConeSample>(c);
  ASSERT_GT(s.count, 0);
  for (const auto& u : s.directions) EXPECT_NEAR(std::abs(u[2]), 1.0, 1e-9);
}

TEST(CqNumber, TwoLines) {
  const ClosedSet a = line(0.0, pt({0, 0}));
  const ClosedSet b = line(1.0472, pt({0, 0}));
  const CQReport r = cq_number(a, Restriction::whole(), b, Restriction::whole(), pt({0, 0}), 0.5,
                               CqMethod::Exact2D);
  EXPECT_NEAR(r.theta, std::cos(1.0472), 1e-9);
  EXPECT_NEAR(r.theta, 0.5, 1e-4);
}

TEST(CqNumber, SawtoothExact) {
  const SetPtr a = share(ClosedSet::sawtooth(60));
  const SetPtr b = share(sawtooth::reflected_companion(60));
  for (double delta : {0.1, 0.5}) {
    const CQReport r = cq_number(*a, Restriction::boundary(a), *b, Restriction::boundary(b),
                                 pt({0, 0}), delta, CqMethod::Exact2D);
    EXPECT_NEAR(r.theta, std::sqrt(7.0 / 8.0), 1e-6);
  }
}

TEST(CqNumber, SawtoothSampled) {
  const SetPtr a = share(ClosedSet::sawtooth(60));
  const SetPtr b = share(sawtooth::reflected_companion(60));
  const CQReport r = cq_number(*a, Restriction::boundary(a), *b, Restriction::boundary(b),
                               pt({0, 0}), 0.5, CqMethod::Sampled, {20000, 5});
  EXPECT_NEAR(r.theta, std::sqrt(7.0 / 8.0), 5e-3);
  EXPECT_EQ(r.samples, 20000);
}

TEST(CqNumber, FarPointIsAnError) {
  const ClosedSet a = line(0.0, pt({0, 5}));
  EXPECT_THROW(cq_number(a, Restriction::whole(), a, Restriction::whole(), pt({0, 0}), 1.0,
                         CqMethod::Exact2D),
               std::domain_error);
}

TEST(CqCondition, GridIsDecreasing) {
  const ClosedSet a = line(0.0, pt({0, 0}));
  const ClosedSet b = line(kPi / 2, pt({0, 0}));
  const CQCondition c = cq_condition(a, Restriction::whole(), b, Restriction::whole(), pt({0, 0}),
                                     {0.1, 1.0, 0.5}, CqMethod::Exact2D);
  ASSERT_EQ(c.grid.size(), 3u);
  EXPECT_EQ(c.grid.front().first, 1.0);
  EXPECT_EQ(c.grid.back().first, 0.1);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.theta_bar, 0.0, 1e-15);
}

TEST(Regularity, SawtoothLowerBound) {
  const SetPtr b = share(sawtooth::reflected_companion(60));
  const RegularityReport r = regularity_probe(ClosedSet::sawtooth(60), Restriction::boundary(b),
                                              pt({0, 0}), 0.5, {4000, 7});
  EXPECT_GT(r.eps_lower, 0.17);
  EXPECT_GE(r.eps_lower, std::sin(std::acos(0.75) / 4.0) - 1e-4);
  EXPECT_TRUE(r.has_witness);
}

TEST(Regularity, ConvexSetsHaveNoPositiveWitness) {
  const ClosedSet h = ClosedSet::half_space(pt({0, 1}), 0.0);
  const RegularityReport r =
      regularity_probe(h, Restriction::whole(), pt({0, 0}), 1.0, {2000, 1});
  EXPECT_LE(r.eps_lower, 1e-9);
}

TEST(ThetaEstimate, OrthogonalLines) {
  const ThetaEstimate t =
      theta_estimate(line(0.0, pt({0, 0})), line(kPi / 2, pt({0, 0})), pt({0, 0}), 1.0, {500, 2});
  ASSERT_TRUE(t.theta.has_value());
  EXPECT_NEAR(*t.theta, 0.0, 1e-12);
}

// theta_delta grows with delta and does not see a common isometry.
TEST(Properties, CqNumberMonotoneAndInvariant) {
  Rng rng(8);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), rad(0.05, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Point c = gaussian(2, rng, 0.3);
    // A: a box with a corner at c, B: a line through a nearby point and c.
    const Point lo = c - pt({rad(rng), rad(rng)});
    const ClosedSet a = trial % 2 == 0 ? ClosedSet::box(lo, c) : line(ang(rng), c);
    const ClosedSet b = ClosedSet::transformed(ClosedSet::box(pt({0, 0}), pt({rad(rng), rad(rng)})),
                                               random_orthogonal(2, rng), c);
    const double d1 = rad(rng) * 0.5, d2 = d1 + rad(rng);
    const auto theta = [&](const ClosedSet& x, const ClosedSet& y, const Point& cc, double d) {
      return cq_number(x, Restriction::whole(), y, Restriction::whole(), cc, d, CqMethod::Exact2D)
          .theta;
    };
    const double t1 = theta(a, b, c, d1);
    const double t2 = theta(a, b, c, d2);
    EXPECT_LE(t1, t2 + 1e-12);

    const Matrix q = random_orthogonal(2, rng);
    const Point t = gaussian(2, rng);
    const ClosedSet qa = ClosedSet::transformed(a, q, t);
    const ClosedSet qb = ClosedSet::transformed(b, q, t);
    EXPECT_NEAR(theta(qa, qb, q * c + t, d1), t1, 1e-9);
    EXPECT_NEAR(theta(qa, qb, q * c + t, d2), t2, 1e-9);
  }
}

TEST(Properties, SampledCqNumberMonotoneInDelta) {
  const SetPtr a = share(ClosedSet::sawtooth(30));
  const SetPtr b = share(sawtooth::reflected_companion(30));
  const CQCondition c = cq_condition(*a, Restriction::boundary(a), *b, Restriction::boundary(b),
                                     pt({0, 0}), {0.05, 0.1, 0.2, 0.4}, CqMethod::Sampled,
                                     {5000, 3});
  for (std::size_t i = 1; i < c.grid.size(); ++i) {
    EXPECT_LE(c.grid[i].second, c.grid[i - 1].second + 1e-12);
  }
}
