#include <gtest/gtest.h>

#include "wulff/lp.hpp"

using namespace wulff;

TEST(LinearProgram, TextbookOptimum)
{
    // max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18
    Eigen::MatrixXd A(3, 2);
    A << 1, 0, 0, 2, 3, 2;
    Eigen::VectorXd b(3), c(2);
    b << 4, 12, 18;
    c << 3, 5;
    const auto r = LinearProgram(A, b, c).solve();
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_NEAR(r.value, 36.0, 1e-12);
    EXPECT_NEAR(r.x(0), 2.0, 1e-12);
    EXPECT_NEAR(r.x(1), 6.0, 1e-12);
}

TEST(LinearProgram, Infeasible)
{
    // x <= -1 with x >= 0
    Eigen::MatrixXd A(1, 1);
    A << 1;
    Eigen::VectorXd b(1), c(1);
    b << -1;
    c << 1;
    EXPECT_EQ(LinearProgram(A, b, c).solve().status, LpStatus::infeasible);
}

TEST(LinearProgram, Unbounded)
{
    Eigen::MatrixXd A(1, 2);
    A << 1, -1;
    Eigen::VectorXd b(1), c(2);
    b << 1;
    c << 1, 1;
    EXPECT_EQ(LinearProgram(A, b, c).solve().status, LpStatus::unbounded);
}

TEST(LinearProgram, NegativeRhsNeedsPhaseOne)
{
    // max -x - y  s.t.  -x - y <= -2  ->  x + y >= 2, optimum -2
    Eigen::MatrixXd A(1, 2);
    A << -1, -1;
    Eigen::VectorXd b(1), c(2);
    b << -2;
    c << -1, -1;
    const auto r = LinearProgram(A, b, c).solve();
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_NEAR(r.value, -2.0, 1e-12);
}

TEST(ChebyshevCenter, Square)
{
    Eigen::MatrixXd N(4, 2);
    N << 1, 0, -1, 0, 0, 1, 0, -1;
    Eigen::VectorXd off(4);
    off << 1, 0, 1, 0; // [0,1]^2
    const auto cc = chebyshev_center(N, off, Eigen::Vector2d(5, -3));
    EXPECT_NEAR(cc.radius, 0.5, 1e-12);
    EXPECT_NEAR(cc.center(0), 0.5, 1e-12);
    EXPECT_NEAR(cc.center(1), 0.5, 1e-12);
}

TEST(ChebyshevCenter, EmptyIntersection)
{
    Eigen::MatrixXd N(2, 1);
    N << 1, -1;
    Eigen::VectorXd off(2);
    off << 0, -1; // x <= 0 and x >= 1
    EXPECT_LT(chebyshev_center(N, off, Eigen::VectorXd::Zero(1)).radius, 0.0);
}
