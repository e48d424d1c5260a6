#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "wulff/body.hpp"

namespace wulff {

/// {x : (x - center)^T shape (x - center) <= 1}
struct Ellipsoid
{
    Vector center;
    Matrix shape;
    int iterations = 0;
};

struct MveeOptions
{
    double tolerance = 1e-7;
    int max_iterations = 200000;
};

/// Minimum-volume enclosing ellipsoid of a point set: Khachiyan's
/// barycentric coordinate ascent with Todd-Yildirim away steps.
inline Ellipsoid minimum_volume_ellipsoid(const std::vector<Vector>& points, const MveeOptions& opt = {})
{
    if (points.empty()) throw DegenerateInput("empty point set");
    const auto n = points.front().size();
    const auto m = static_cast<Eigen::Index>(points.size());
    if (m < n + 1) throw DegenerateInput("fewer than n+1 points");
    Matrix Q(n + 1, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        Q.col(j).head(n) = points[static_cast<std::size_t>(j)];
        Q(n, j) = 1.0;
    }
    const double d = static_cast<double>(n + 1);
    Vector u = Vector::Constant(m, 1.0 / static_cast<double>(m));
    Ellipsoid out;
    Vector M(m);
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        const Matrix X = Q * u.asDiagonal() * Q.transpose();
        Eigen::LDLT<Matrix> ldlt(X);
        if (ldlt.info() != Eigen::Success) throw DegenerateInput("points are not full-dimensional");
        const Matrix Y = ldlt.solve(Q);
        M = (Q.array() * Y.array()).colwise().sum().transpose();
        Eigen::Index jmax = 0;
        const double mmax = M.maxCoeff(&jmax);
        Eigen::Index jmin = -1;
        double mmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < m; ++j)
            if (u(j) > 0.0 && M(j) < mmin) {
                mmin = M(j);
                jmin = j;
            }
        const double up = mmax / d - 1.0;
        const double down = 1.0 - mmin / d;
        if (up <= opt.tolerance && down <= opt.tolerance) break;
        if (up >= down) {
            const double step = (mmax - d) / (d * (mmax - 1.0));
            u *= 1.0 - step;
            u(jmax) += step;
        } else {
            // Away step, clipped so the weight stays nonnegative.
            double step = (d - mmin) / (d * (mmin - 1.0));
            step = std::min(step, u(jmin) / (1.0 - u(jmin)));
            u *= 1.0 + step;
            u(jmin) -= step;
            u(jmin) = std::max(0.0, u(jmin));
        }
    }
    if (it == opt.max_iterations) throw EllipsoidNotConverged("MVEE iteration cap reached");

    Matrix P(n, m);
    for (Eigen::Index j = 0; j < m; ++j) P.col(j) = points[static_cast<std::size_t>(j)];
    out.center = P * u;
    const Matrix S = P * u.asDiagonal() * P.transpose() - out.center * out.center.transpose();
    out.shape = S.inverse() / static_cast<double>(n);
    // Scale so the stopping tolerance never leaves a point outside.
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, (p - out.center).dot(out.shape * (p - out.center)));
    if (worst > 1.0) out.shape /= worst;
    out.iterations = it;
    return out;
}

struct RoundnessEstimate
{
    double q_upper = 1.0;
    AffineMap normalizing_map;
    double r = 0.0;
    double R = 0.0;
};

/// Upper bound on the inverse roundness q_K: the ratio R/r of outer and inner
/// radii after mapping the minimum-volume enclosing ellipsoid to the unit ball.
/// The hint is informational; any affine candidate yields a valid bound.
inline RoundnessEstimate inverse_roundness(const ConvexBody& K, bool symmetric_hint = false,
                                           const MveeOptions& opt = {})
{
    (void)symmetric_hint;
    const Ellipsoid E = minimum_volume_ellipsoid(K.vertices(), opt);
    Eigen::LLT<Matrix> llt(E.shape);
    if (llt.info() != Eigen::Success) throw EllipsoidNotConverged("ellipsoid shape is not positive definite");
    const Matrix Lt = llt.matrixL().transpose();
    RoundnessEstimate out;
    out.normalizing_map = {Lt, -Lt * E.center};
    const ConvexBody T = apply_affine(K, out.normalizing_map);
    out.R = enclosing_ball(T).radius;
    out.r = chebyshev_ball(T).radius;
    out.q_upper = std::max(1.0, out.R / out.r);
    return out;
}

} // namespace wulff
