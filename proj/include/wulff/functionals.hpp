#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wulff/body.hpp"
#include "wulff/ellipsoid.hpp"
#include "wulff/optimize.hpp"
#include "wulff/overlap.hpp"

namespace wulff {

/// L translated so its volume centroid sits at the origin.
inline ConvexBody centered(const ConvexBody& L)
{
    return translate(L, -L.centroid());
}

/// Anisotropic perimeter P_L(E): each boundary simplex of E weighted by the
/// support function of L at its outward normal. L is centred at its centroid
/// first so the origin is interior.
inline double anisotropic_perimeter(const ConvexBody& E, const ConvexBody& L, int cap = kDefaultFacetDimensionCap)
{
    if (E.dimension() != L.dimension()) throw DimensionMismatch("perimeter of bodies of different dimension");
    const ConvexBody Lc = centered(L);
    double p = 0.0;
    for (const auto& f : E.boundary(cap).facets)
        if (f.area > 0.0) p += f.area * support(Lc, f.normal);
    return p;
}

/// Euclidean perimeter (surface area).
inline double perimeter(const ConvexBody& E, int cap = kDefaultFacetDimensionCap)
{
    double p = 0.0;
    for (const auto& f : E.boundary(cap).facets) p += f.area;
    return p;
}

/// Wulff-optimal perimeter for the volume of E: n |E|^{(n-1)/n} |L|^{1/n}.
inline double wulff_bound(const ConvexBody& E, const ConvexBody& L, int cap = kDefaultFacetDimensionCap)
{
    const double n = E.dimension();
    return n * std::pow(volume(E, cap), (n - 1.0) / n) * std::pow(volume(L, cap), 1.0 / n);
}

/// Relative excess of P_L(E) over the Wulff bound.
inline double isoperimetric_deficit(const ConvexBody& E, const ConvexBody& L, int cap = kDefaultFacetDimensionCap)
{
    return anisotropic_perimeter(E, L, cap) / wulff_bound(E, L, cap) - 1.0;
}

struct OverlapSearchOptions
{
    double x_tolerance = 1e-6;  // relative to the enclosing radius of K
    double memo_grid = 1e-9;    // relative to the enclosing radius of K
    int max_evaluations_per_start = 3000;
    OverlapOptions overlap{};
};

struct OverlapMaximum
{
    Vector shift;          // maximizing translation x
    double volume = 0.0;   // |K ∩ (x + t L)|
    double start_volume = 0.0;  // value at the centroid-difference start
    int evaluations = 0;
    bool converged = false;
};

/// max over x of |K ∩ (x + t L)|. Nelder-Mead from the centroid difference and
/// 2n axis perturbations of it; the best value wins, ties to the lowest start.
/// |K ∩ (x + tL)|^{1/n} is concave on its support, so that is what is searched.
inline OverlapMaximum maximize_overlap(const ConvexBody& K, const ConvexBody& L, double t,
                                       const OverlapSearchOptions& opt = {})
{
    const int n = K.dimension();
    const OverlapVolume ov(K, L, t, opt.overlap);
    const double R = enclosing_ball(K).radius;
    const double inv_n = 1.0 / n;
    auto objective = [&](const Vector& x) { return -std::pow(ov(x), inv_n); };

    const Vector x0 = K.centroid() - t * L.centroid();
    std::vector<Vector> starts{x0};
    const double h = 0.25 * R;
    for (int i = 0; i < n; ++i) {
        starts.push_back(x0 + h * Vector::Unit(n, i));
        starts.push_back(x0 - h * Vector::Unit(n, i));
    }
    NelderMeadOptions nm;
    nm.initial_step = 0.1 * R;
    nm.x_tolerance = opt.x_tolerance * R;
    nm.memo_grid = opt.memo_grid * R;
    nm.max_evaluations = opt.max_evaluations_per_start;

    OverlapMaximum best;
    best.start_volume = ov(x0);
    best.volume = -1.0;
    bool all_converged = true;
    for (const auto& s : starts) {
        const auto r = nelder_mead(objective, s, nm);
        best.evaluations += r.evaluations;
        all_converged = all_converged && r.converged;
        const double v = std::pow(std::max(0.0, -r.value), static_cast<double>(n));
        if (v > best.volume) {
            best.volume = v;
            best.shift = r.x;
        }
    }
    if (best.start_volume > best.volume) {
        best.volume = best.start_volume;
        best.shift = x0;
    }
    // Evaluate once more at the reported point so value and shift agree exactly.
    best.volume = ov(best.shift);
    best.converged = all_converged;
    return best;
}

struct BodyPairMetrics
{
    double sigma = 1.0;
    double asymmetry = 0.0;
    double bm_deficit = 0.0;
    Vector optimal_shift;
    double scale_lambda = 1.0;
    double max_overlap = 0.0;
    bool converged = true;
};

/// A(K, L) = min_x |K Δ (x + λL)| / |K| with λ^n |L| = |K|.
inline BodyPairMetrics relative_asymmetry(const ConvexBody& K, const ConvexBody& L,
                                          const OverlapSearchOptions& opt = {})
{
    if (K.dimension() != L.dimension()) throw DimensionMismatch("asymmetry of bodies of different dimension");
    const int n = K.dimension();
    const double vk = volume(K);
    const double vl = volume(L);
    BodyPairMetrics m;
    m.scale_lambda = std::pow(vk / vl, 1.0 / n);
    m.sigma = std::max(vk / vl, vl / vk);
    const auto best = maximize_overlap(K, L, m.scale_lambda, opt);
    m.optimal_shift = best.shift;
    m.max_overlap = std::min(best.volume, vk);
    m.asymmetry = std::clamp(2.0 * (vk - m.max_overlap) / vk, 0.0, 2.0);
    m.converged = best.converged;
    return m;
}

/// β(K, L) = |K+L|^{1/n} / (|K|^{1/n} + |L|^{1/n}) - 1.
inline double bm_deficit(const ConvexBody& K, const ConvexBody& L, int cap = kDefaultFacetDimensionCap)
{
    const double n = K.dimension();
    const double s = std::pow(volume(minkowski_sum(K, L, cap), cap), 1.0 / n);
    return s / (std::pow(volume(K, cap), 1.0 / n) + std::pow(volume(L, cap), 1.0 / n)) - 1.0;
}

/// σ, A and β for a pair. σ is the plain volume ratio max(|K|/|L|, |L|/|K|).
inline BodyPairMetrics bm_quantities(const ConvexBody& K, const ConvexBody& L, const OverlapSearchOptions& opt = {})
{
    BodyPairMetrics m = relative_asymmetry(K, L, opt);
    m.bm_deficit = bm_deficit(K, L);
    return m;
}

/// M(K, L) = max_x |K ∩ (L + x)|.
inline OverlapMaximum dar_overlap(const ConvexBody& K, const ConvexBody& L, const OverlapSearchOptions& opt = {})
{
    return maximize_overlap(K, L, 1.0, opt);
}

} // namespace wulff
