#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wulff/body.hpp"
#include "wulff/error.hpp"

namespace wulff {

/// Means of a nonnegative tuple together with the three stability defects.
///   root_defect     = Σ(√x_i − √x)² / n
///   ratio_defect    = Σ(x_i − x)² / (x_i + x) / (2n), with 0/0 taken as 0
///   pairwise_defect = Σ_{i<j}(√x_i − √x_j)² / (n(n−1))
/// where x is the geometric mean. The residuals are AM − GM − defect, each
/// computed from a cancellation-free identity where one exists.
struct MeanDefect
{
    std::vector<double> tuple;
    double geo_mean = 0.0;
    double arith_mean = 0.0;
    double root_defect = 0.0;
    double ratio_defect = 0.0;
    double pairwise_defect = 0.0;
    double root_residual = 0.0;
    double ratio_residual = 0.0;
    double pairwise_residual = 0.0;
};

enum class EqualityCase { none, all_equal, some_zero, n_equals_2, all_but_one_zero };

/// Which of the two sharp inequalities an equality question is about:
/// the root-deviation form or the pairwise form.
enum class MeanInequality { root, pairwise };

inline const char* to_string(EqualityCase c)
{
    switch (c) {
    case EqualityCase::none: return "none";
    case EqualityCase::all_equal: return "all-equal";
    case EqualityCase::some_zero: return "some-zero";
    case EqualityCase::n_equals_2: return "n-equals-2";
    case EqualityCase::all_but_one_zero: return "all-but-one-zero";
    }
    return "none";
}

namespace detail {

inline void check_tuple(const std::vector<double>& x)
{
    if (x.size() < 2) throw NegativeEntry("tuple needs at least two entries");
    for (double v : x)
        if (!(v >= 0.0) || !std::isfinite(v)) throw NegativeEntry("tuple entries must be finite and nonnegative");
}

/// (Π y_i)^{1/n} in log space; exact zero if any entry is zero.
inline double geometric_mean(const std::vector<double>& y)
{
    double s = 0.0;
    for (double v : y) {
        if (v == 0.0) return 0.0;
        s += std::log(v);
    }
    return std::exp(s / static_cast<double>(y.size()));
}

} // namespace detail

inline MeanDefect stable_amgm(const std::vector<double>& tuple)
{
    detail::check_tuple(tuple);
    MeanDefect d;
    d.tuple = tuple;
    const double scale = *std::max_element(tuple.begin(), tuple.end());
    if (scale == 0.0) return d;

    const auto n = tuple.size();
    const double dn = static_cast<double>(n);
    std::vector<double> y(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = tuple[i] / scale;
        r[i] = std::sqrt(y[i]);
    }
    const double g = detail::geometric_mean(y);
    const double rg = std::sqrt(g);
    double sum = 0.0, root_sum = 0.0, d22 = 0.0, d23 = 0.0, d24 = 0.0, pair_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += y[i];
        root_sum += r[i];
        d22 += (r[i] - rg) * (r[i] - rg);
        const double den = y[i] + g;
        if (den > 0.0) d23 += (y[i] - g) * (y[i] - g) / den;
        for (std::size_t j = i + 1; j < n; ++j) {
            d24 += (r[i] - r[j]) * (r[i] - r[j]);
            pair_mean += r[i] * r[j];
        }
    }
    const double pairs = dn * (dn - 1.0) / 2.0;
    const double am = sum / dn;
    d.arith_mean = am * scale;
    d.geo_mean = g * scale;
    d.root_defect = d22 / dn * scale;
    d.ratio_defect = d23 / (2.0 * dn) * scale;
    d.pairwise_defect = d24 / (dn * (dn - 1.0)) * scale;
    // AM − GM − root_defect = 2√x (mean √x_i − √x)
    d.root_residual = 2.0 * rg * (root_sum / dn - rg) * scale;
    // AM − GM − pairwise_defect = mean_{i<j} √(x_i x_j) − x
    d.pairwise_residual = (pair_mean / pairs - g) * scale;
    d.ratio_residual = (am - g - d23 / (2.0 * dn)) * scale;
    if (n == 2) d.pairwise_residual = 0.0;
    return d;
}

/// Equality case of the chosen inequality, decided by its residual on the
/// max-scaled tuple at tolerance tol. When the residual vanishes the label
/// says which configuration produced it.
inline EqualityCase classify_equality(const MeanDefect& d, MeanInequality which, double tol = 1e-12)
{
    const auto& x = d.tuple;
    const auto n = x.size();
    if (which == MeanInequality::pairwise && n == 2) return EqualityCase::n_equals_2;
    const double hi = *std::max_element(x.begin(), x.end());
    const double lo = *std::min_element(x.begin(), x.end());
    if (hi == 0.0) return EqualityCase::all_equal;
    const double residual = (which == MeanInequality::root ? d.root_residual : d.pairwise_residual) / hi;
    if (residual > tol) return EqualityCase::none;
    // A vanishing residual with a spread above ~√tol can only come from a
    // (numerically) zero geometric mean.
    if (hi - lo <= 10.0 * std::sqrt(tol) * hi) return EqualityCase::all_equal;
    return which == MeanInequality::root ? EqualityCase::some_zero : EqualityCase::all_but_one_zero;
}

struct RootRatioCheck
{
    double lhs = 0.0;  // Σ √(x_i / (1 + x_i))
    double rhs = 0.0;  // n √(x / (1 + x)), x the geometric mean
};

/// Both sides of Σ √(x_i/(1+x_i)) ≥ n √(x/(1+x)). Only valid on [0, 1/2]^n,
/// so anything outside is refused.
inline RootRatioCheck root_ratio_check(const std::vector<double>& tuple)
{
    if (tuple.empty()) throw OutOfRangeEntry("empty tuple");
    for (double v : tuple)
        if (!(v >= 0.0 && v <= 0.5)) throw OutOfRangeEntry("entries must lie in [0, 1/2]");
    RootRatioCheck c;
    for (double v : tuple) c.lhs += std::sqrt(v / (1.0 + v));
    const double g = detail::geometric_mean(tuple);
    c.rhs = static_cast<double>(tuple.size()) * std::sqrt(g / (1.0 + g));
    return c;
}

struct BoxLimitStep
{
    double epsilon = 0.0;
    double lhs = 0.0;       // |L + εQ|^{1/n} = Π(x_i + ε)^{1/n}
    double rhs = 0.0;       // |L|^{1/n} + |εQ|^{1/n} = GM + ε
    double residual = 0.0;  // Π(x_i + ε) − (GM + ε)^n
    double ratio = 0.0;     // residual / ε
    bool holds = false;
};

struct BoxLimitReport
{
    std::vector<BoxLimitStep> steps;
    double expected_limit = 0.0;  // e_{n−1}(x) − n GM^{n−1}
    double extrapolated = 0.0;    // last two ratios, linearly extrapolated to ε = 0
    bool all_hold = true;
    bool ratio_nonnegative = true;
};

/// Brunn-Minkowski for the box pair εQ = [0,ε]^n, L = Π[0,x_i] along a
/// shrinking ε. The first-order term of the residual is
/// ε (e_{n−1}(x) − n GM^{n−1}), which is nonnegative by AM-GM applied to
/// the n products Π_{j≠i} x_j.
inline BoxLimitReport box_bm_limit(const std::vector<double>& tuple, const std::vector<double>& epsilons,
                                   double tol = 1e-12)
{
    for (double v : tuple)
        if (!(v > 0.0) || !std::isfinite(v)) throw NegativeEntry("box sides must be positive");
    if (tuple.empty()) throw DegenerateInput("empty tuple");
    const int n = static_cast<int>(tuple.size());
    const double dn = n;
    const double g = detail::geometric_mean(tuple);
    BoxLimitReport rep;
    double e_n1 = 0.0;
    for (int i = 0; i < n; ++i) {
        double p = 1.0;
        for (int j = 0; j < n; ++j)
            if (j != i) p *= tuple[static_cast<std::size_t>(j)];
        e_n1 += p;
    }
    rep.expected_limit = e_n1 - dn * std::pow(g, dn - 1.0);

    double prev = -1.0;
    for (double eps : epsilons) {
        if (!(eps > 0.0)) throw DegenerateInput("epsilon must be positive");
        if (prev > 0.0 && eps >= prev) throw DegenerateInput("epsilon sequence must decrease");
        prev = eps;
        Vector hi(n);
        for (int i = 0; i < n; ++i) hi(i) = tuple[static_cast<std::size_t>(i)] + eps;
        double vol;
        if (n <= kDefaultFacetDimensionCap) {
            vol = volume(box(Vector::Zero(n), hi));
        } else {
            vol = hi.prod();
        }
        BoxLimitStep s;
        s.epsilon = eps;
        s.lhs = std::pow(vol, 1.0 / dn);
        s.rhs = g + eps;
        s.residual = vol - std::pow(g + eps, dn);
        s.ratio = s.residual / eps;
        s.holds = s.lhs >= s.rhs - tol * std::max(1.0, s.rhs);
        rep.all_hold = rep.all_hold && s.holds;
        rep.ratio_nonnegative = rep.ratio_nonnegative && s.ratio >= -tol * std::max(1.0, vol) / eps;
        rep.steps.push_back(s);
    }
    if (rep.steps.size() >= 2) {
        const auto& a = rep.steps[rep.steps.size() - 2];
        const auto& b = rep.steps.back();
        rep.extrapolated = b.ratio - b.epsilon * (a.ratio - b.ratio) / (a.epsilon - b.epsilon);
    } else if (!rep.steps.empty()) {
        rep.extrapolated = rep.steps.back().ratio;
    }
    return rep;
}

} // namespace wulff
