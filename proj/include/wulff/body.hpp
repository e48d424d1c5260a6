#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wulff/error.hpp"
#include "wulff/hull.hpp"
#include "wulff/lp.hpp"
#include "wulff/rng.hpp"

namespace wulff {

/// Dimension above which facet-based methods (exact volume, inscribed ball,
/// facet membership) refuse to run unless the caller raises the cap.
inline constexpr int kDefaultFacetDimensionCap = 6;

struct Ball
{
    Vector center;
    double radius = 0.0;
};

struct AffineMap
{
    Matrix matrix;
    Vector shift;

    Vector operator()(const Vector& x) const { return matrix * x + shift; }

    static AffineMap identity(int n) { return {Matrix::Identity(n, n), Vector::Zero(n)}; }
    static AffineMap scaling(int n, double t) { return {t * Matrix::Identity(n, n), Vector::Zero(n)}; }
    static AffineMap translation(const Vector& v)
    {
        const auto n = v.size();
        return {Matrix::Identity(n, n), v};
    }
};

/// Supporting halfspace  normal . x <= offset  with unit outward normal.
struct Halfspace
{
    Vector normal;
    double offset = 0.0;
};

/// Full-dimensional convex polytope in vertex representation. The boundary
/// triangulation and the facet list are derived on first use and shared
/// between copies; a body never changes after construction.
class ConvexBody
{
public:
    int dimension() const { return dimension_; }
    const std::vector<Vector>& vertices() const { return vertices_; }
    const std::string& label() const { return label_; }

    ConvexBody with_label(std::string label) const
    {
        ConvexBody copy = *this;
        copy.label_ = std::move(label);
        return copy;
    }

    /// Scale-aware geometric tolerance 1e-9 * (1 + radius about the vertex mean).
    double tolerance() const { return 1e-9 * (1.0 + spread_); }

    /// Oriented simplicial boundary.
    const BoundaryTriangulation& boundary(int cap = kDefaultFacetDimensionCap) const
    {
        require_cap(cap);
        return cache().tri;
    }

    /// Irredundant H-representation: one entry per supporting hyperplane.
    const std::vector<Halfspace>& facets(int cap = kDefaultFacetDimensionCap) const
    {
        require_cap(cap);
        return cache().facets;
    }

    /// Volume centroid (vertex mean above the facet cap).
    Vector centroid(int cap = kDefaultFacetDimensionCap) const
    {
        if (dimension_ > cap) return vertex_mean();
        return cache().centroid;
    }

    Vector vertex_mean() const
    {
        Vector m = Vector::Zero(dimension_);
        for (const auto& v : vertices_) m += v;
        return m / static_cast<double>(vertices_.size());
    }

    /// Membership with the body's tolerance, using the facet list.
    bool contains(const Vector& x, double extra_tol = 0.0) const
    {
        const double tol = tolerance() + extra_tol;
        for (const auto& h : facets(dimension_))
            if (h.normal.dot(x) - h.offset > tol) return false;
        return true;
    }

    /// Builds a body from points already known to be extreme and full-dimensional.
    static ConvexBody from_extreme_points(std::vector<Vector> vertices, std::string label)
    {
        ConvexBody b;
        b.dimension_ = static_cast<int>(vertices.front().size());
        b.vertices_ = std::move(vertices);
        b.label_ = std::move(label);
        b.spread_ = 0.0;
        const Vector m = b.vertex_mean();
        for (const auto& v : b.vertices_) b.spread_ = std::max(b.spread_, (v - m).norm());
        b.cache_ = std::make_shared<Cache>();
        return b;
    }

private:
    struct Cache
    {
        std::once_flag once;
        BoundaryTriangulation tri;
        std::vector<Halfspace> facets;
        Vector centroid;
    };

    ConvexBody() = default;

    void require_cap(int cap) const
    {
        if (dimension_ > cap)
            throw MethodUnavailable("facet methods disabled in dimension " + std::to_string(dimension_) +
                                    " (cap " + std::to_string(cap) + ")");
    }

    const Cache& cache() const
    {
        std::call_once(cache_->once, [this] { build_cache(*cache_); });
        return *cache_;
    }

    void build_cache(Cache& c) const
    {
        c.tri = boundary_triangulation(vertices_);
        const int n = dimension_;
        const double tol = tolerance();
        // Merge coplanar simplices into supporting hyperplanes.
        std::vector<const BoundaryFacet*> order;
        for (const auto& f : c.tri.facets)
            if (f.shape >= detail::kSliverShape) order.push_back(&f);
        std::stable_sort(order.begin(), order.end(),
                         [](const BoundaryFacet* a, const BoundaryFacet* b) { return a->shape > b->shape; });
        for (const BoundaryFacet* f : order) {
            bool merged = false;
            for (const auto& h : c.facets) {
                if (h.normal.dot(f->normal) > 1.0 - 1e-9 && std::abs(h.offset - f->offset) <= tol) {
                    merged = true;
                    break;
                }
            }
            if (merged) continue;
            // Only planes that support every vertex become constraints.
            bool supporting = true;
            for (const auto& v : vertices_)
                if (f->normal.dot(v) - f->offset > tol) {
                    supporting = false;
                    break;
                }
            if (supporting) c.facets.push_back({f->normal, f->offset});
        }
        // Volume centroid from the cone decomposition about an interior point.
        Vector acc = Vector::Zero(n);
        double vol = 0.0;
        Matrix M(n, n);
        for (const auto& f : c.tri.facets) {
            Vector s = c.tri.interior;
            for (int i = 0; i < n; ++i) {
                const Vector& v = vertices_[static_cast<std::size_t>(f.vertices[static_cast<std::size_t>(i)])];
                M.col(i) = v - c.tri.interior;
                s += v;
            }
            const double w = M.determinant();
            vol += w;
            acc += w * s / static_cast<double>(n + 1);
        }
        c.centroid = vol > 0.0 ? Vector(acc / vol) : vertex_mean();
    }

    int dimension_ = 0;
    std::vector<Vector> vertices_;
    std::string label_;
    double spread_ = 0.0;
    std::shared_ptr<Cache> cache_;
};

namespace detail {

inline void check_points(const std::vector<Vector>& points)
{
    if (points.empty()) throw DegenerateInput("empty point set");
    const auto n = points.front().size();
    if (n < 2) throw DegenerateInput("dimension must be at least 2");
    for (const auto& p : points) {
        if (p.size() != n) throw DimensionMismatch("points of mixed dimension");
        if (!p.allFinite()) throw DegenerateInput("non-finite coordinate");
    }
    if (static_cast<Eigen::Index>(points.size()) < n + 1) throw DegenerateInput("fewer than n+1 points");
}

/// True when `p` lies in conv(others) up to `tol` per coordinate.
inline bool in_convex_hull(const Vector& p, const std::vector<const Vector*>& others, double tol)
{
    const auto n = p.size();
    const auto k = static_cast<Eigen::Index>(others.size());
    if (k == 0) return false;
    Matrix A(2 * n + 2, k);
    Vector b(2 * n + 2);
    for (Eigen::Index j = 0; j < k; ++j) {
        A.col(j).head(n) = *others[static_cast<std::size_t>(j)];
        A.col(j).segment(n, n) = -*others[static_cast<std::size_t>(j)];
        A(2 * n, j) = 1.0;
        A(2 * n + 1, j) = -1.0;
    }
    b.head(n) = p.array() + tol;
    b.segment(n, n) = -p.array() + tol;
    b(2 * n) = 1.0 + 1e-12;
    b(2 * n + 1) = -1.0 + 1e-12;
    Vector c = Vector::Zero(k);
    return LinearProgram(A, b, c, 1e-11).solve().status == LpStatus::optimal;
}

inline double spread_of(const std::vector<Vector>& pts)
{
    Vector m = Vector::Zero(pts.front().size());
    for (const auto& p : pts) m += p;
    m /= static_cast<double>(pts.size());
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, (p - m).norm());
    return r;
}

} // namespace detail

/// Convex hull with a minimal vertex list. Points inside the hull, including
/// points in the relative interior of faces, are removed by LP redundancy tests.
inline ConvexBody convex_hull(const std::vector<Vector>& points, std::string label = "hull",
                              int cap = kDefaultFacetDimensionCap)
{
    detail::check_points(points);
    const int n = static_cast<int>(points.front().size());
    const double tol = 1e-9 * (1.0 + detail::spread_of(points));

    std::vector<int> candidates;
    if (n <= cap) {
        candidates = boundary_triangulation(points).vertices;
    } else {
        Matrix P(n, static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) P.col(static_cast<Eigen::Index>(i)) = points[i];
        const double half = 0.5 * (P.rowwise().maxCoeff() - P.rowwise().minCoeff()).maxCoeff();
        candidates = detail::dedupe(P, 1e-12 * std::max(half, 1e-300));
        const Matrix centered = [&] {
            Matrix C(n, static_cast<Eigen::Index>(candidates.size()));
            for (std::size_t i = 0; i < candidates.size(); ++i)
                C.col(static_cast<Eigen::Index>(i)) = points[static_cast<std::size_t>(candidates[i])];
            return Matrix(C.colwise() - C.rowwise().mean());
        }();
        Eigen::JacobiSVD<Matrix> svd(centered);
        if (svd.singularValues()(n - 1) <= 1e-9 * std::max(1.0, svd.singularValues()(0)))
            throw DegenerateInput("point set is not full-dimensional");
    }

    std::vector<char> alive(candidates.size(), 1);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::vector<const Vector*> others;
        others.reserve(candidates.size());
        for (std::size_t j = 0; j < candidates.size(); ++j)
            if (j != i && alive[j]) others.push_back(&points[static_cast<std::size_t>(candidates[j])]);
        if (detail::in_convex_hull(points[static_cast<std::size_t>(candidates[i])], others, tol)) alive[i] = 0;
    }
    std::vector<Vector> verts;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (alive[i]) verts.push_back(points[static_cast<std::size_t>(candidates[i])]);
    if (static_cast<int>(verts.size()) < n + 1) throw DegenerateInput("hull has fewer than n+1 vertices");
    return ConvexBody::from_extreme_points(std::move(verts), std::move(label));
}

/// X + Y = {x + y}.
inline ConvexBody minkowski_sum(const ConvexBody& K, const ConvexBody& L, int cap = kDefaultFacetDimensionCap)
{
    if (K.dimension() != L.dimension()) throw DimensionMismatch("Minkowski sum of bodies of different dimension");
    std::vector<Vector> sums;
    sums.reserve(K.vertices().size() * L.vertices().size());
    for (const auto& a : K.vertices())
        for (const auto& b : L.vertices()) sums.push_back(a + b);
    return convex_hull(sums, K.label() + "+" + L.label(), cap);
}

/// Support function h_K(u) = max over vertices of v . u.
inline double support(const ConvexBody& K, const Vector& direction)
{
    if (direction.size() != K.dimension()) throw DimensionMismatch("direction dimension");
    if (!(direction.norm() > 0.0)) throw ZeroDirection("support function needs a nonzero direction");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : K.vertices()) best = std::max(best, v.dot(direction));
    return best;
}

struct VolumeEstimate
{
    double value = 0.0;
    double standard_error = 0.0;
};

struct MonteCarlo
{
    std::size_t samples = 100000;
    RngSeed seed{};
};

/// Largest inscribed ball, from an LP over the facet list.
inline Ball chebyshev_ball(const ConvexBody& K, int cap = kDefaultFacetDimensionCap)
{
    const auto& facets = K.facets(cap);
    const int n = K.dimension();
    Matrix A(static_cast<Eigen::Index>(facets.size()), n);
    Vector b(static_cast<Eigen::Index>(facets.size()));
    for (std::size_t i = 0; i < facets.size(); ++i) {
        A.row(static_cast<Eigen::Index>(i)) = facets[i].normal.transpose();
        b(static_cast<Eigen::Index>(i)) = facets[i].offset;
    }
    const auto cc = chebyshev_center(A, b, K.boundary(cap).interior);
    if (cc.radius <= 0.0) throw DegenerateInput("body has empty interior");
    return {cc.center, cc.radius};
}

namespace detail {

inline Ball circumball(const std::vector<const Vector*>& support, int n)
{
    if (support.empty()) return {Vector::Zero(n), -1.0};
    const Vector& p0 = *support.front();
    if (support.size() == 1) return {p0, 0.0};
    const auto k = static_cast<Eigen::Index>(support.size()) - 1;
    Matrix M(n, k);
    Vector rhs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        M.col(j) = *support[static_cast<std::size_t>(j + 1)] - p0;
        rhs(j) = 0.5 * M.col(j).squaredNorm();
    }
    const Matrix G = M.transpose() * M;
    const Vector alpha = G.completeOrthogonalDecomposition().solve(rhs);
    Ball b{p0 + M * alpha, 0.0};
    for (const Vector* s : support) b.radius = std::max(b.radius, (*s - b.center).norm());
    return b;
}

inline Ball welzl(const std::vector<Vector>& pts, std::vector<int>& order, std::size_t end,
                  std::vector<const Vector*>& support, int n, double tol)
{
    Ball b = circumball(support, n);
    if (static_cast<int>(support.size()) == n + 1) return b;
    for (std::size_t i = 0; i < end; ++i) {
        const Vector& p = pts[static_cast<std::size_t>(order[i])];
        if (b.radius < 0.0 || (p - b.center).norm() > b.radius + tol) {
            support.push_back(&p);
            b = welzl(pts, order, i, support, n, tol);
            support.pop_back();
            std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i),
                        order.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        }
    }
    return b;
}

} // namespace detail

/// Smallest ball containing all vertices (move-to-front Welzl recursion).
inline Ball enclosing_ball(const ConvexBody& K)
{
    const auto& pts = K.vertices();
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<const Vector*> support;
    const int n = K.dimension();
    Ball b = detail::welzl(pts, order, pts.size(), support, n, 1e-12 * (1.0 + detail::spread_of(pts)));
    // Recursion on floating point can leave a point a hair outside; absorb it.
    for (const auto& p : pts) b.radius = std::max(b.radius, (p - b.center).norm());
    return b;
}

/// Exact volume from the oriented boundary triangulation.
inline double volume(const ConvexBody& K, int cap = kDefaultFacetDimensionCap)
{
    return K.boundary(cap).volume;
}

/// Membership oracle: facets when available, LP otherwise.
inline bool body_contains(const ConvexBody& K, const Vector& x, int cap = kDefaultFacetDimensionCap)
{
    if (K.dimension() <= cap) return K.contains(x);
    std::vector<const Vector*> vs;
    for (const auto& v : K.vertices()) vs.push_back(&v);
    return detail::in_convex_hull(x, vs, K.tolerance());
}

/// Uniform point in the ball by Gaussian direction and radial inversion.
inline Vector sample_in_ball(const Ball& ball, CounterRng& rng)
{
    const auto n = ball.center.size();
    Vector g(n);
    double norm = 0.0;
    do {
        for (Eigen::Index i = 0; i < n; ++i) g(i) = rng.normal();
        norm = g.norm();
    } while (!(norm > 0.0));
    const double r = ball.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
    return ball.center + g * (r / norm);
}

inline double unit_ball_volume(int n)
{
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Rejection sampling from the enclosing ball: unbiased estimate with its
/// binomial standard error.
inline VolumeEstimate volume(const ConvexBody& K, const MonteCarlo& mc, int cap = kDefaultFacetDimensionCap)
{
    const Ball B = enclosing_ball(K);
    CounterRng rng(mc.seed);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < mc.samples; ++s)
        if (body_contains(K, sample_in_ball(B, rng), cap)) ++hits;
    const double ball_vol = unit_ball_volume(K.dimension()) * std::pow(B.radius, K.dimension());
    const double p = static_cast<double>(hits) / static_cast<double>(mc.samples);
    return {ball_vol * p, ball_vol * std::sqrt(p * (1.0 - p) / static_cast<double>(mc.samples))};
}

/// Image of K under x -> Ax + b.
inline ConvexBody apply_affine(const ConvexBody& K, const AffineMap& T)
{
    const int n = K.dimension();
    if (T.matrix.rows() != n || T.matrix.cols() != n || T.shift.size() != n)
        throw DimensionMismatch("affine map dimension");
    const double scale = T.matrix.norm() / std::sqrt(static_cast<double>(n));
    const double det = T.matrix.determinant();
    if (!(std::abs(det) > 1e-12 * std::pow(scale, n))) throw SingularMatrix("affine map is singular");
    std::vector<Vector> mapped;
    mapped.reserve(K.vertices().size());
    for (const auto& v : K.vertices()) mapped.push_back(T(v));
    return ConvexBody::from_extreme_points(std::move(mapped), K.label());
}

inline ConvexBody translate(const ConvexBody& K, const Vector& shift)
{
    return apply_affine(K, AffineMap::translation(shift));
}

inline ConvexBody scale(const ConvexBody& K, double t)
{
    return apply_affine(K, AffineMap::scaling(K.dimension(), t));
}

/// Hull of standard-normal samples; with `symmetric`, of the samples and their
/// negatives. Degenerate draws are retried on fresh streams up to 8 times.
inline ConvexBody random_body(int dimension, int n_points, bool symmetric, RngSeed seed,
                              int cap = kDefaultFacetDimensionCap)
{
    if (dimension < 2) throw DegenerateInput("dimension must be at least 2");
    if (n_points < dimension + 1 && !(symmetric && 2 * n_points >= dimension + 1))
        throw DegenerateInput("need at least n+1 points");
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        CounterRng rng(attempt == 0 ? seed : seed.derive(attempt));
        std::vector<Vector> pts;
        for (int i = 0; i < n_points; ++i) {
            Vector p(dimension);
            for (int k = 0; k < dimension; ++k) p(k) = rng.normal();
            pts.push_back(p);
        }
        if (symmetric)
            for (int i = 0; i < n_points; ++i) pts.push_back(-pts[static_cast<std::size_t>(i)]);
        try {
            return convex_hull(pts,
                               "random(n=" + std::to_string(dimension) + ",m=" + std::to_string(n_points) +
                                   (symmetric ? ",sym" : "") + ",seed=" + std::to_string(seed.seed) +
                                   ",stream=" + std::to_string(seed.stream) + ")",
                               cap);
        } catch (const DegenerateInput&) {
        }
    }
    throw DegenerateInput("random body degenerate after 8 attempts");
}

// Named bodies used throughout the tests, the lab and the CLI.

inline ConvexBody box(const Vector& lower, const Vector& upper, std::string label = "box")
{
    const auto n = lower.size();
    if (upper.size() != n) throw DimensionMismatch("box corners");
    if (!((upper - lower).minCoeff() > 0.0)) throw DegenerateInput("box with empty interior");
    std::vector<Vector> pts;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Vector p(n);
        for (Eigen::Index i = 0; i < n; ++i) p(i) = (mask >> i) & 1U ? upper(i) : lower(i);
        pts.push_back(p);
    }
    return ConvexBody::from_extreme_points(std::move(pts), std::move(label));
}

inline ConvexBody cube(int n, double lo = 0.0, double hi = 1.0)
{
    return box(Vector::Constant(n, lo), Vector::Constant(n, hi),
               "cube(n=" + std::to_string(n) + ")");
}

inline ConvexBody standard_simplex(int n)
{
    std::vector<Vector> pts{Vector::Zero(n)};
    for (int i = 0; i < n; ++i) pts.push_back(Vector::Unit(n, i));
    return ConvexBody::from_extreme_points(std::move(pts), "simplex(n=" + std::to_string(n) + ")");
}

/// Regular k-gon inscribed in the circle of the given radius about the origin.
inline ConvexBody regular_polygon(int k, double radius = 1.0)
{
    if (k < 3) throw DegenerateInput("polygon needs at least 3 sides");
    std::vector<Vector> pts;
    for (int i = 0; i < k; ++i) {
        const double t = 2.0 * std::numbers::pi * i / k;
        pts.push_back((Vector(2) << radius * std::cos(t), radius * std::sin(t)).finished());
    }
    return ConvexBody::from_extreme_points(std::move(pts), "polygon(" + std::to_string(k) + ")");
}

} // namespace wulff
