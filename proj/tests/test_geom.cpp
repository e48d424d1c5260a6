#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "wulff/body.hpp"

using namespace wulff;

namespace {

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

Vector random_unit(int n, CounterRng& rng)
{
    Vector u(n);
    for (int i = 0; i < n; ++i) u(i) = rng.normal();
    return u.normalized();
}

// Membership by LP over the raw point cloud: independent of the facet list.
bool lp_member(const std::vector<Vector>& cloud, const Vector& x)
{
    std::vector<const Vector*> ptrs;
    for (const auto& p : cloud) ptrs.push_back(&p);
    return detail::in_convex_hull(x, ptrs, 1e-12);
}

} // namespace

TEST(ConvexHull, InteriorPointRemoved)
{
    const auto K = convex_hull({vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1}), vec({0.5, 0.5})});
    EXPECT_EQ(K.vertices().size(), 4u);
    EXPECT_NEAR(volume(K), 1.0, 1e-14);
}

TEST(ConvexHull, EdgeMidpointRemoved)
{
    const auto K = convex_hull({vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1}), vec({0.5, 0.0})});
    EXPECT_EQ(K.vertices().size(), 4u);
}

TEST(ConvexHull, CubeHasEightVerticesSixFacets)
{
    std::vector<Vector> pts;
    for (int m = 0; m < 8; ++m) pts.push_back(vec({double(m & 1), double((m >> 1) & 1), double((m >> 2) & 1)}));
    const auto K = convex_hull(pts);
    EXPECT_EQ(K.vertices().size(), 8u);
    EXPECT_EQ(K.facets().size(), 6u);
    EXPECT_NEAR(volume(K), 1.0, 1e-13);
}

TEST(ConvexHull, FaceCentresOfHypercubeRemoved)
{
    std::vector<Vector> pts = cube(4).vertices();
    for (int i = 0; i < 4; ++i) {
        Vector c = Vector::Constant(4, 0.5);
        c(i) = 1.0;
        pts.push_back(c);
    }
    const auto K = convex_hull(pts);
    EXPECT_EQ(K.vertices().size(), 16u);
    EXPECT_EQ(K.facets().size(), 8u);
}

TEST(ConvexHull, DegenerateInputs)
{
    EXPECT_THROW(convex_hull({vec({0, 0}), vec({1, 1}), vec({2, 2}), vec({3, 3})}), DegenerateInput);
    EXPECT_THROW(convex_hull({vec({0, 0}), vec({1, 1})}), DegenerateInput);
    EXPECT_THROW(convex_hull({vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({1, 1, 0}), vec({0.3, 0.2, 0})}),
                 DegenerateInput);
    EXPECT_THROW(convex_hull({vec({0, 0}), vec({1, 0}), vec({0, 1, 0})}), DimensionMismatch);
}

TEST(ConvexHull, GaussianCloudVolumeMatchesMembershipEstimate)
{
    CounterRng rng(RngSeed{2024, 1});
    std::vector<Vector> cloud;
    for (int i = 0; i < 50; ++i) cloud.push_back(vec({rng.normal(), rng.normal(), rng.normal()}));
    const auto K = convex_hull(cloud);
    // Bounding-box rejection with LP membership on the raw cloud.
    Vector lo = cloud[0], hi = cloud[0];
    for (const auto& p : cloud) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double box_vol = (hi - lo).prod();
    CounterRng s(RngSeed{2024, 2});
    const int N = 20000;
    int hits = 0;
    for (int i = 0; i < N; ++i) {
        Vector x(3);
        for (int k = 0; k < 3; ++k) x(k) = s.uniform(lo(k), hi(k));
        hits += lp_member(cloud, x);
    }
    const double p = double(hits) / N;
    const double est = box_vol * p;
    const double se = box_vol * std::sqrt(p * (1 - p) / N);
    EXPECT_NEAR(volume(K), est, 3 * se);
}

TEST(ConvexHull, VerticesAreExtremeAndSatisfyFacets)
{
    const auto K = random_body(3, 40, false, RngSeed{9, 9});
    for (const auto& v : K.vertices()) {
        for (const auto& h : K.facets()) EXPECT_LE(h.normal.dot(v), h.offset + K.tolerance());
        std::vector<const Vector*> others;
        for (const auto& w : K.vertices())
            if (&w != &v) others.push_back(&w);
        EXPECT_FALSE(detail::in_convex_hull(v, others, 1e-9));
    }
    for (const auto& h : K.facets()) {
        int on = 0;
        for (const auto& v : K.vertices()) on += std::abs(h.normal.dot(v) - h.offset) <= 1e-8;
        EXPECT_GE(on, 3);
    }
}

TEST(MinkowskiSum, UnitSquares)
{
    const auto S = minkowski_sum(cube(2), cube(2));
    EXPECT_EQ(S.vertices().size(), 4u);
    EXPECT_NEAR(volume(S), 4.0, 1e-13);
    EXPECT_NEAR(support(S, vec({1, 0})), 2.0, 1e-14);
    EXPECT_NEAR(support(S, vec({-1, 0})), 0.0, 1e-14);
}

TEST(MinkowskiSum, BoxPair)
{
    const auto S = minkowski_sum(cube(2), box(vec({0, 0}), vec({1, 1.1})));
    EXPECT_NEAR(volume(S), 2.0 * 2.1, 1e-13);
    EXPECT_NEAR(support(S, vec({0, 1})), 2.1, 1e-14);
}

TEST(MinkowskiSum, WithPointIsTranslation)
{
    const auto K = random_body(3, 20, false, RngSeed{4, 0});
    const Vector p = vec({0.3, -1.0, 2.0});
    // A single point is not a body; translate() is the dedicated path and must agree
    // with summing against a tiny simplex in the limit.
    const auto T = translate(K, p);
    CounterRng rng(RngSeed{4, 1});
    for (int i = 0; i < 20; ++i) {
        const Vector u = random_unit(3, rng);
        EXPECT_NEAR(support(T, u), support(K, u) + p.dot(u), 1e-12);
    }
    EXPECT_NEAR(volume(T), volume(K), 1e-12);
}

TEST(MinkowskiSum, DimensionMismatch)
{
    EXPECT_THROW(minkowski_sum(cube(2), cube(3)), DimensionMismatch);
}

TEST(Volume, ClosedForms)
{
    for (int n = 2; n <= 6; ++n) EXPECT_NEAR(volume(cube(n)), 1.0, 1e-12) << n;
    EXPECT_NEAR(volume(standard_simplex(4)), 1.0 / 24.0, 1e-15);
    EXPECT_NEAR(volume(box(vec({0, 0}), vec({2, 2.1}))), 4.2, 1e-14);
    EXPECT_NEAR(volume(regular_polygon(6)), 1.5 * std::sqrt(3.0), 1e-14);
}

TEST(Volume, ExactUnavailableAboveCap)
{
    const auto K = cube(7);
    EXPECT_THROW(volume(K), MethodUnavailable);
    EXPECT_NEAR(volume(cube(3), 3), 1.0, 1e-13);
    EXPECT_THROW(volume(cube(3), 2), MethodUnavailable);
}

TEST(Volume, MonteCarloAboveCap)
{
    const auto K = cube(7, -1.0, 1.0);
    const auto est = volume(K, MonteCarlo{4000, RngSeed{1, 1}});
    EXPECT_NEAR(est.value, 128.0, 4 * est.standard_error + 1e-9);
    EXPECT_GT(est.standard_error, 0.0);
}

TEST(Support, Examples)
{
    const auto P = regular_polygon(64);
    CounterRng rng(RngSeed{0, 3});
    for (int i = 0; i < 50; ++i) {
        const double h = support(P, random_unit(2, rng));
        EXPECT_LE(h, 1.0 + 1e-15);
        EXPECT_GE(h, std::cos(std::numbers::pi / 64) - 1e-15);
    }
    EXPECT_DOUBLE_EQ(support(cube(3, -1, 1), vec({1, 0, 0})), 1.0);
    EXPECT_DOUBLE_EQ(support(cube(2), vec({1, 1})), 2.0);
    EXPECT_THROW(support(cube(2), vec({0, 0})), ZeroDirection);
    EXPECT_NEAR(support(cube(2), vec({3, 1.5})), 3.0 * support(cube(2), vec({1, 0.5})), 1e-15);
}

TEST(Balls, CubeAndSquare)
{
    const auto C = cube(3, -1, 1);
    EXPECT_NEAR(chebyshev_ball(C).radius, 1.0, 1e-12);
    EXPECT_NEAR(enclosing_ball(C).radius, std::sqrt(3.0), 1e-12);
    const auto S = cube(2);
    EXPECT_NEAR(chebyshev_ball(S).radius, 0.5, 1e-12);
    EXPECT_NEAR(enclosing_ball(S).radius, std::sqrt(0.5), 1e-12);
    EXPECT_NEAR((enclosing_ball(S).center - vec({0.5, 0.5})).norm(), 0.0, 1e-12);
}

TEST(Balls, RandomPolytopeMembership)
{
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto K = random_body(3, 25, false, RngSeed{77, s});
        const Ball in = chebyshev_ball(K);
        const Ball out = enclosing_ball(K);
        EXPECT_LE(in.radius, out.radius);
        for (const auto& v : K.vertices()) EXPECT_LE((v - out.center).norm(), out.radius + 1e-12);
        // Inscribed ball touches no facet from outside.
        for (const auto& h : K.facets()) EXPECT_LE(h.normal.dot(in.center) + in.radius, h.offset + 1e-9);
        CounterRng rng(RngSeed{77, 100 + s});
        for (int i = 0; i < 50; ++i) {
            const Vector x = in.center + in.radius * (1 - 1e-9) * random_unit(3, rng);
            EXPECT_TRUE(lp_member(K.vertices(), x));
        }
    }
}

TEST(Balls, EnclosingBallIsMinimalForTriangle)
{
    // Obtuse triangle: ball is on the longest edge.
    const auto T = convex_hull({vec({0, 0}), vec({4, 0}), vec({2, 0.5})});
    const Ball b = enclosing_ball(T);
    EXPECT_NEAR(b.radius, 2.0, 1e-12);
    // Acute equilateral: circumradius.
    const auto E = regular_polygon(3, 1.7);
    EXPECT_NEAR(enclosing_ball(E).radius, 1.7, 1e-12);
}

TEST(AffineMap, Examples)
{
    const auto K = random_body(2, 12, false, RngSeed{5, 5});
    const auto I = apply_affine(K, AffineMap::identity(2));
    ASSERT_EQ(I.vertices().size(), K.vertices().size());
    for (std::size_t i = 0; i < K.vertices().size(); ++i) EXPECT_EQ(I.vertices()[i], K.vertices()[i]);
    EXPECT_NEAR(volume(scale(K, 2.5)), 2.5 * 2.5 * volume(K), 1e-12);
    Matrix shear(2, 2);
    shear << 1, 1, 0, 1;
    EXPECT_NEAR(volume(apply_affine(cube(2), {shear, Vector::Zero(2)})), 1.0, 1e-14);
    Matrix sing(2, 2);
    sing << 1, 2, 2, 4;
    EXPECT_THROW(apply_affine(cube(2), {sing, Vector::Zero(2)}), SingularMatrix);
}

TEST(RandomBody, Examples)
{
    const auto T = random_body(2, 3, false, RngSeed{1, 0});
    EXPECT_EQ(T.vertices().size(), 3u);
    const auto S = random_body(3, 15, true, RngSeed{2, 0});
    for (const auto& v : S.vertices()) {
        bool found = false;
        for (const auto& w : S.vertices()) found |= (v + w).norm() < 1e-14;
        EXPECT_TRUE(found);
    }
    const auto A = random_body(4, 30, false, RngSeed{3, 1});
    const auto B = random_body(4, 30, false, RngSeed{3, 1});
    ASSERT_EQ(A.vertices().size(), B.vertices().size());
    for (std::size_t i = 0; i < A.vertices().size(); ++i) EXPECT_EQ(A.vertices()[i], B.vertices()[i]);
    EXPECT_THROW(random_body(3, 3, false, RngSeed{}), DegenerateInput);
}

TEST(ConvexBody, ConcurrentCacheInitialisation)
{
    const auto K = random_body(4, 60, false, RngSeed{8, 8});
    std::vector<double> vols(8);
    std::vector<std::thread> ts;
    for (int i = 0; i < 8; ++i) ts.emplace_back([&, i] { vols[static_cast<std::size_t>(i)] = volume(K); });
    for (auto& t : ts) t.join();
    for (double v : vols) EXPECT_EQ(v, vols[0]);
}

// Properties over a random corpus.

class GeomCorpus : public ::testing::TestWithParam<int>
{
};

TEST_P(GeomCorpus, SupportAdditivity)
{
    const int n = GetParam();
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto K = random_body(n, 3 * n + 4, false, RngSeed{100, s});
        const auto L = random_body(n, 3 * n + 4, s % 2 == 0, RngSeed{200, s});
        const auto S = minkowski_sum(K, L);
        CounterRng rng(RngSeed{300, s});
        for (int i = 0; i < 30; ++i) {
            const Vector u = random_unit(n, rng);
            EXPECT_NEAR(support(S, u), support(K, u) + support(L, u), 1e-9);
        }
    }
}

TEST_P(GeomCorpus, AffineVolume)
{
    const int n = GetParam();
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto K = random_body(n, 3 * n + 4, false, RngSeed{400, s});
        CounterRng rng(RngSeed{401, s});
        Matrix A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
        Vector b(n);
        for (int i = 0; i < n; ++i) b(i) = rng.normal();
        const double lhs = volume(apply_affine(K, {A, b}));
        const double rhs = std::abs(A.determinant()) * volume(K);
        EXPECT_NEAR(lhs, rhs, 1e-9 * rhs);
    }
}

TEST_P(GeomCorpus, ExactAgreesWithMonteCarlo)
{
    const int n = GetParam();
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto K = random_body(n, 4 * n, false, RngSeed{500, s});
        const auto est = volume(K, MonteCarlo{20000, RngSeed{501, s}});
        EXPECT_NEAR(volume(K), est.value, 4 * est.standard_error);
    }
}

TEST_P(GeomCorpus, InnerRadiusBelowOuter)
{
    const int n = GetParam();
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto K = random_body(n, 3 * n + 2, s % 3 == 0, RngSeed{600, s});
        EXPECT_LE(chebyshev_ball(K).radius, enclosing_ball(K).radius);
    }
}

TEST_P(GeomCorpus, BrunnMinkowski)
{
    const int n = GetParam();
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto K = random_body(n, 2 * n + 3, false, RngSeed{700, s});
        const auto L = random_body(n, 2 * n + 3, false, RngSeed{701, s});
        const double lhs = std::pow(volume(minkowski_sum(K, L)), 1.0 / n);
        const double rhs = std::pow(volume(K), 1.0 / n) + std::pow(volume(L), 1.0 / n);
        EXPECT_GE(lhs, rhs * (1 - 1e-9));
    }
}

TEST_P(GeomCorpus, CentroidOfCentredBody)
{
    const int n = GetParam();
    const auto K = random_body(n, 3 * n, true, RngSeed{800, 0});
    EXPECT_LT(K.centroid().norm(), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Dimensions, GeomCorpus, ::testing::Values(2, 3, 4));
