#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wulff/functionals.hpp"

using namespace wulff;

namespace {

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

ConvexBody box2(double w, double h)
{
    return box(vec({0, 0}), vec({w, h}));
}

// Overlap of [0,a]x[0,b] with [x,x+c]x[y,y+d], coordinate-wise.
double box_overlap(double a, double b, double c, double d, double x, double y)
{
    const double wx = std::max(0.0, std::min(a, x + c) - std::max(0.0, x));
    const double wy = std::max(0.0, std::min(b, y + d) - std::max(0.0, y));
    return wx * wy;
}

double grid_max_overlap(double a, double b, double c, double d)
{
    double best = 0.0;
    const int steps = 400;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            const double x = -c + (a + c) * i / steps;
            const double y = -d + (b + d) * j / steps;
            best = std::max(best, box_overlap(a, b, c, d, x, y));
        }
    return best;
}

ConvexBody random_affine_image(const ConvexBody& K, CounterRng& rng, AffineMap& T)
{
    const int n = K.dimension();
    Matrix A(n, n);
    do {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = (i == j ? 1.0 : 0.0) + 0.4 * rng.normal();
    } while (std::abs(A.determinant()) < 0.2);
    Vector b(n);
    for (int i = 0; i < n; ++i) b(i) = rng.uniform(-1.0, 1.0);
    T = {A, b};
    return apply_affine(K, T);
}

} // namespace

TEST(AnisotropicPerimeter, SquareAgainstItself)
{
    // Four edges of length 2, each at support distance 1: P_L(L) = 8 = n|L|.
    const auto L = box(vec({-1, -1}), vec({1, 1}));
    EXPECT_NEAR(anisotropic_perimeter(L, L), 8.0, 1e-12);
    EXPECT_NEAR(anisotropic_perimeter(L, L), 2.0 * volume(L), 1e-12);
}

TEST(AnisotropicPerimeter, DiscApproximationGivesEuclideanPerimeter)
{
    const auto disc = regular_polygon(256);
    EXPECT_NEAR(anisotropic_perimeter(cube(2), disc), 4.0, 1e-3);
    EXPECT_NEAR(perimeter(cube(2)), 4.0, 1e-14);
}

TEST(AnisotropicPerimeter, MatchesEdgeByEdgeSum)
{
    const auto E = cube(2);
    const auto L = box2(1.0, 2.0);
    // Hand enumeration: edges of E and the recentred L = [-1/2,1/2] x [-1,1].
    const std::vector<Vector> Lc{vec({-0.5, -1}), vec({0.5, -1}), vec({0.5, 1}), vec({-0.5, 1})};
    const std::vector<Vector> Ev{vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1})};
    double hand = 0.0;
    for (std::size_t i = 0; i < Ev.size(); ++i) {
        const Vector e = Ev[(i + 1) % Ev.size()] - Ev[i];
        const Vector nu = vec({e(1), -e(0)}).normalized();
        double h = -1e300;
        for (const auto& v : Lc) h = std::max(h, v.dot(nu));
        hand += e.norm() * h;
    }
    EXPECT_NEAR(hand, 3.0, 1e-15);
    EXPECT_NEAR(anisotropic_perimeter(E, L), hand, 1e-12);
}

TEST(AnisotropicPerimeter, IndependentOfTranslatingL)
{
    const auto E = random_body(3, 12, false, RngSeed{7, 0});
    const auto L = random_body(3, 12, false, RngSeed{7, 1});
    EXPECT_NEAR(anisotropic_perimeter(E, L), anisotropic_perimeter(E, translate(L, vec({5, -3, 2}))), 1e-10);
}

TEST(IsoperimetricDeficit, HomothetIsOptimal)
{
    const auto L = random_body(3, 14, false, RngSeed{11, 0});
    const auto E = translate(scale(L, 3.0), vec({1, 2, -4}));
    EXPECT_NEAR(isoperimetric_deficit(E, L), 0.0, 1e-9);
}

TEST(IsoperimetricDeficit, SquareAgainstDisc)
{
    const auto disc = regular_polygon(256);
    const double delta = isoperimetric_deficit(cube(2), disc);
    // Exact for the polygon (a vertex sits on each axis), then against the disc.
    EXPECT_NEAR(delta, 2.0 / std::sqrt(volume(disc)) - 1.0, 1e-12);
    EXPECT_NEAR(delta, 2.0 / std::sqrt(std::numbers::pi) - 1.0, 1e-3);
}

TEST(RelativeAsymmetry, IdenticalBodies)
{
    const auto K = random_body(2, 10, false, RngSeed{3, 0});
    const auto m = relative_asymmetry(K, K);
    EXPECT_NEAR(m.asymmetry, 0.0, 1e-9);
    EXPECT_LT(m.optimal_shift.norm(), 1e-5);
    EXPECT_NEAR(m.scale_lambda, 1.0, 1e-12);
}

TEST(RelativeAsymmetry, FlatBoxAgainstSquare)
{
    const auto m = relative_asymmetry(cube(2), box2(2.0, 0.5));
    EXPECT_NEAR(m.scale_lambda, 1.0, 1e-12);
    EXPECT_NEAR(grid_max_overlap(1, 1, 2, 0.5), 0.5, 1e-12);
    EXPECT_NEAR(m.max_overlap, 0.5, 1e-9);
    EXPECT_NEAR(m.asymmetry, 1.0, 1e-8);
}

TEST(RelativeAsymmetry, SlightlyTallBox)
{
    const auto m = relative_asymmetry(cube(2), box2(1.0, 1.1));
    const double lambda = 1.0 / std::sqrt(1.1);
    EXPECT_NEAR(m.scale_lambda, lambda, 1e-12);
    // Closed form: the scaled box is narrower than K and taller, overlap = lambda.
    const double closed = 2.0 * (1.0 - lambda);
    const double grid = 2.0 * (1.0 - grid_max_overlap(1, 1, lambda, 1.1 * lambda));
    EXPECT_NEAR(grid, closed, 1e-2);
    EXPECT_NEAR(m.asymmetry, closed, 1e-8);
    EXPECT_NEAR(m.asymmetry, 0.0931, 1e-4);
}

TEST(RelativeAsymmetry, CubesInThreeDimensions)
{
    const auto K = cube(3);
    const auto L = box(vec({0, 0, 0}), vec({2, 1, 0.5}));
    const auto m = relative_asymmetry(K, L);
    // Overlap of the unit cube with [0,2]x[0,1]x[0,1/2] placed optimally. The
    // maximum sits on a kink, so the value is only as good as the 1e-6 search.
    EXPECT_NEAR(m.max_overlap, 0.5, 1e-6);
    EXPECT_NEAR(m.asymmetry, 1.0, 2e-6);
}

TEST(BmQuantities, Examples)
{
    const auto K = cube(2);
    EXPECT_NEAR(bm_deficit(K, K), 0.0, 1e-12);
    const double closed = std::sqrt(4.2) / (1.0 + std::sqrt(1.1)) - 1.0;
    EXPECT_NEAR(bm_deficit(K, box2(1.0, 1.1)), closed, 1e-12);
    EXPECT_NEAR(closed, 2.83e-4, 1e-6);

    const auto m = bm_quantities(K, box2(1.0, 1.1));
    EXPECT_NEAR(m.sigma, 1.1, 1e-12);
    EXPECT_NEAR(m.bm_deficit, closed, 1e-12);
}

TEST(BmQuantities, HomothetsVersusPerturbed)
{
    for (int n = 2; n <= 4; ++n) {
        const auto K = random_body(n, 2 * n + 6, false, RngSeed{21, static_cast<std::uint64_t>(n)});
        Vector v = Vector::LinSpaced(n, -1.0, 2.0);
        EXPECT_NEAR(bm_deficit(K, translate(scale(K, 0.7), v)), 0.0, 1e-9) << n;
        std::vector<Vector> pts = K.vertices();
        pts.front() *= 1.3;
        EXPECT_GT(bm_deficit(K, convex_hull(pts)), 1e-9) << n;
    }
}

TEST(InverseRoundness, Examples)
{
    EXPECT_LE(inverse_roundness(regular_polygon(128)).q_upper, 1.01);
    for (int n = 2; n <= 4; ++n)
        EXPECT_NEAR(inverse_roundness(cube(n, -1.0, 1.0), true).q_upper, std::sqrt(double(n)), 1e-3) << n;
    EXPECT_NEAR(inverse_roundness(standard_simplex(3)).q_upper, 3.0, 1e-3);
}

TEST(InverseRoundness, NormalizingMapSendsEllipsoidToBall)
{
    const auto K = random_body(3, 20, false, RngSeed{5, 5});
    const auto q = inverse_roundness(K);
    const auto T = apply_affine(K, q.normalizing_map);
    for (const auto& v : T.vertices()) EXPECT_LE(v.norm(), 1.0 + 1e-9);
    EXPECT_NEAR(q.q_upper, q.R / q.r, 1e-12);
}

TEST(DarOverlap, Examples)
{
    EXPECT_NEAR(dar_overlap(cube(2), cube(2)).volume, 1.0, 1e-9);
    EXPECT_NEAR(dar_overlap(cube(2), box2(2.0, 0.5)).volume, 0.5, 1e-9);
}

TEST(DarOverlap, FarApartBodiesStillGetMatched)
{
    const auto K = cube(2);
    const auto L = translate(box2(0.5, 0.5), vec({40, -30}));
    EXPECT_NEAR(dar_overlap(K, L).volume, 0.25, 1e-9);
}

TEST(OverlapVolume, PlanarAgreesWithBoxFormula)
{
    const OverlapVolume ov(cube(2), box2(2.0, 0.5), 1.0);
    CounterRng rng(RngSeed{9, 9});
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-2.5, 1.5), y = rng.uniform(-1.0, 1.5);
        EXPECT_NEAR(ov(vec({x, y})), box_overlap(1, 1, 2, 0.5, x, y), 1e-12);
    }
}

TEST(OverlapVolume, StackedAgreesWithBoxFormula)
{
    for (int n = 3; n <= 4; ++n) {
        const Vector hi = Vector::LinSpaced(n, 0.6, 1.4);
        const OverlapVolume ov(cube(n), box(Vector::Zero(n), hi), 1.0);
        CounterRng rng(RngSeed{10, static_cast<std::uint64_t>(n)});
        for (int i = 0; i < 50; ++i) {
            Vector x(n);
            double expect = 1.0;
            for (int k = 0; k < n; ++k) {
                x(k) = rng.uniform(-hi(k), 1.0);
                expect *= std::max(0.0, std::min(1.0, x(k) + hi(k)) - std::max(0.0, x(k)));
            }
            EXPECT_NEAR(ov(x), expect, 1e-10) << n;
        }
    }
}

TEST(OverlapVolume, StackedAgreesWithMonteCarloOnRandomBodies)
{
    for (int n = 3; n <= 4; ++n) {
        const auto K = random_body(n, 2 * n + 6, true, RngSeed{31, static_cast<std::uint64_t>(n)});
        const auto L = random_body(n, 2 * n + 6, false, RngSeed{32, static_cast<std::uint64_t>(n)});
        const OverlapVolume ov(K, L, 0.8);
        const Vector x = K.centroid() - 0.8 * L.centroid() + Vector::Constant(n, 0.1);
        const double exact = ov(x);
        OverlapOptions mc;
        mc.exact_dimension_cap = 2;
        mc.mc_samples = 400000;
        const OverlapVolume sampled(K, L, 0.8, mc);
        const double est = sampled(x);
        const double p = exact / volume(K);
        const double se = volume(K) * std::sqrt(p * (1 - p) / 400000.0);
        EXPECT_NEAR(est, exact, 5 * se + 1e-12) << n;
    }
}

class FunctionalCorpus : public ::testing::TestWithParam<int>
{
};

TEST_P(FunctionalCorpus, WulffInequalityAndEquality)
{
    const int n = GetParam();
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto E = random_body(n, 2 * n + 6, s % 2 == 0, RngSeed{41, s});
        const auto L = random_body(n, 2 * n + 6, s % 3 == 0, RngSeed{42, s});
        const double P = anisotropic_perimeter(E, L);
        EXPECT_GE(P, wulff_bound(E, L) - 1e-9 * P);
        EXPECT_NEAR(anisotropic_perimeter(L, L), n * volume(L), 1e-9 * n * volume(L));
    }
}

TEST_P(FunctionalCorpus, PairMetricInvariants)
{
    const int n = GetParam();
    for (std::uint64_t s = 0; s < 3; ++s) {
        const auto K = random_body(n, 2 * n + 6, s % 2 == 0, RngSeed{51, s});
        const auto L = random_body(n, 2 * n + 6, false, RngSeed{52, s});
        const auto m = bm_quantities(K, L);
        EXPECT_GE(m.sigma, 1.0);
        EXPECT_GE(m.asymmetry, 0.0);
        EXPECT_LE(m.asymmetry, 2.0);
        EXPECT_GE(m.bm_deficit, -1e-9);
        EXPECT_NEAR(std::pow(m.scale_lambda, n) * volume(L), volume(K), 1e-9 * volume(K));
        const OverlapVolume ov(K, L, m.scale_lambda);
        EXPECT_NEAR(ov(m.optimal_shift), m.max_overlap, 1e-12 * volume(K));
        EXPECT_GE(m.max_overlap, ov(K.centroid() - m.scale_lambda * L.centroid()));
    }
}

TEST_P(FunctionalCorpus, RoundnessBounds)
{
    const int n = GetParam();
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto K = random_body(n, 3 * n + 4, false, RngSeed{61, s});
        EXPECT_LE(inverse_roundness(K).q_upper, n + 1e-2);
        const auto S = random_body(n, 3 * n + 4, true, RngSeed{62, s});
        EXPECT_LE(inverse_roundness(S, true).q_upper, std::sqrt(double(n)) + 1e-2);
    }
}

INSTANTIATE_TEST_SUITE_P(Dimensions, FunctionalCorpus, ::testing::Values(2, 3, 4));

TEST(RelativeAsymmetry, AffineInvariance)
{
    CounterRng rng(RngSeed{71, 0});
    for (int n = 2; n <= 3; ++n)
        for (std::uint64_t s = 0; s < 3; ++s) {
            const auto K = random_body(n, 2 * n + 6, false, RngSeed{72, s});
            const auto L = random_body(n, 2 * n + 6, true, RngSeed{73, s});
            AffineMap T;
            const auto TK = random_affine_image(K, rng, T);
            const auto TL = apply_affine(L, T);
            EXPECT_NEAR(relative_asymmetry(TK, TL).asymmetry, relative_asymmetry(K, L).asymmetry, 1e-4)
                << n << " " << s;
        }
}

TEST(DarOverlap, PlanarInequalityAndBounds)
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto K = random_body(2, 8, s % 2 == 0, RngSeed{81, s});
        const auto L = random_body(2, 8, false, RngSeed{82, s});
        const double M = dar_overlap(K, L).volume;
        EXPECT_GE(M, 0.0);
        EXPECT_LE(M, std::min(volume(K), volume(L)) * (1 + 1e-12));
        const double lhs = std::sqrt(volume(minkowski_sum(K, L)));
        const double rhs = std::sqrt(M) + std::sqrt(volume(K) * volume(L) / M);
        EXPECT_GE(lhs, rhs - 1e-6) << s;
    }
}
