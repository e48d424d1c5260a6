#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wulff/assignment.hpp"
#include "wulff/body.hpp"
#include "wulff/ellipsoid.hpp"
#include "wulff/functionals.hpp"
#include "wulff/rng.hpp"

namespace wulff {

inline constexpr int kMaxTransportSamples = 4096;

/// Trace-inequality constant 2√2 / ln 2.
inline const double kTraceConstant = 2.0 * std::numbers::sqrt2 / std::numbers::ln2;

/// Equal-size samples of K and L matched to minimize total squared distance.
/// assignment[i] is the target matched with source i.
struct DiscreteMap
{
    std::vector<Vector> sources;
    std::vector<Vector> targets;
    std::vector<int> assignment;
    double cost = 0.0;
    double volume_ratio = 1.0;  // |L| / |K|, or 1 when built from raw samples

    int dimension() const { return sources.empty() ? 0 : static_cast<int>(sources.front().size()); }
    std::size_t size() const { return sources.size(); }
    const Vector& image(std::size_t i) const { return targets[static_cast<std::size_t>(assignment[i])]; }
};

/// `count` points of K from a shifted Halton sequence over the bounding box,
/// keeping those inside K.
inline std::vector<Vector> sample_uniform(const ConvexBody& K, int count, RngSeed seed)
{
    const int n = K.dimension();
    Vector lo = K.vertices().front(), hi = lo;
    for (const auto& v : K.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    ShiftedHalton seq(n, seed);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    Vector u(n);
    const std::size_t cap = static_cast<std::size_t>(count) * 100000u + 1000u;
    for (std::size_t tries = 0; out.size() < static_cast<std::size_t>(count); ++tries) {
        if (tries > cap) throw DegenerateInput("body occupies too little of its bounding box to sample");
        seq.next(u);
        Vector p = lo + (hi - lo).cwiseProduct(u);
        if (K.contains(p, -K.tolerance())) out.push_back(std::move(p));
    }
    return out;
}

/// Optimal matching between two equal-size point clouds.
inline DiscreteMap discrete_brenier(std::vector<Vector> sources, std::vector<Vector> targets)
{
    if (sources.size() != targets.size()) throw DimensionMismatch("source and target sample counts differ");
    if (sources.size() > static_cast<std::size_t>(kMaxTransportSamples))
        throw SampleBudgetExceeded("at most " + std::to_string(kMaxTransportSamples) + " samples");
    const int m = static_cast<int>(sources.size());
    std::vector<double> cost(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            cost[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] =
                (sources[static_cast<std::size_t>(i)] - targets[static_cast<std::size_t>(j)]).squaredNorm();
    DiscreteMap map;
    map.assignment = solve_assignment(cost, m, &map.cost);
    map.sources = std::move(sources);
    map.targets = std::move(targets);
    return map;
}

inline DiscreteMap discrete_brenier(const ConvexBody& K, const ConvexBody& L, int n_samples, RngSeed seed)
{
    if (K.dimension() != L.dimension()) throw DimensionMismatch("transport between bodies of different dimension");
    if (n_samples > kMaxTransportSamples)
        throw SampleBudgetExceeded("at most " + std::to_string(kMaxTransportSamples) + " samples");
    if (n_samples < 1) throw DegenerateInput("need at least one sample");
    DiscreteMap map = discrete_brenier(sample_uniform(K, n_samples, seed.derive(0)),
                                       sample_uniform(L, n_samples, seed.derive(1)));
    map.volume_ratio = volume(L) / volume(K);
    return map;
}

struct SwapCheck
{
    double worst_gain = 0.0;  // largest cost decrease found, relative to the mean pair cost
    std::size_t improving = 0;
    std::size_t checked = 0;
};

/// Exchanging the targets of any two sources never lowers the cost.
inline SwapCheck two_swap_check(const DiscreteMap& map, double tol = 1e-12)
{
    SwapCheck out;
    const std::size_t m = map.size();
    const double scale = m ? map.cost / static_cast<double>(m) + 1e-300 : 1.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& a = map.sources[i];
            const auto& b = map.sources[j];
            const double now = (a - map.image(i)).squaredNorm() + (b - map.image(j)).squaredNorm();
            const double swapped = (a - map.image(j)).squaredNorm() + (b - map.image(i)).squaredNorm();
            const double gain = (now - swapped) / scale;
            out.worst_gain = std::max(out.worst_gain, gain);
            if (gain > tol) ++out.improving;
            ++out.checked;
        }
    return out;
}

/// Cyclic monotonicity on random triples: neither rotation of three targets
/// lowers the cost.
inline SwapCheck three_cycle_check(const DiscreteMap& map, std::size_t triples, RngSeed seed, double tol = 1e-12)
{
    SwapCheck out;
    const std::size_t m = map.size();
    if (m < 3) return out;
    const double scale = map.cost / static_cast<double>(m) + 1e-300;
    CounterRng rng(seed);
    for (std::size_t t = 0; t < triples; ++t) {
        std::array<std::size_t, 3> idx{};
        idx[0] = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(m) - 1));
        do idx[1] = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(m) - 1));
        while (idx[1] == idx[0]);
        do idx[2] = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(m) - 1));
        while (idx[2] == idx[0] || idx[2] == idx[1]);
        auto c = [&](std::size_t s, std::size_t t2) { return (map.sources[idx[s]] - map.image(idx[t2])).squaredNorm(); };
        const double now = c(0, 0) + c(1, 1) + c(2, 2);
        const double gain = std::max(now - (c(0, 1) + c(1, 2) + c(2, 0)), now - (c(0, 2) + c(1, 0) + c(2, 1))) / scale;
        out.worst_gain = std::max(out.worst_gain, gain);
        if (gain > tol) ++out.improving;
        ++out.checked;
    }
    return out;
}

/// Least-squares affine map x ↦ A x + b through all (source, image) pairs.
inline AffineMap affine_fit(const DiscreteMap& map)
{
    const int n = map.dimension();
    const auto m = static_cast<Eigen::Index>(map.size());
    if (m < n + 1) throw IllConditionedFit("fewer samples than affine unknowns");
    Matrix X(m, n + 1), Y(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        X.row(i).head(n) = map.sources[static_cast<std::size_t>(i)].transpose();
        X(i, n) = 1.0;
        Y.row(i) = map.image(static_cast<std::size_t>(i)).transpose();
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    if (qr.rank() < n + 1) throw IllConditionedFit("sources are affinely dependent");
    const Matrix B = qr.solve(Y);
    return {B.topRows(n).transpose(), B.row(n).transpose()};
}

struct LocalJacobian
{
    Vector anchor;
    Matrix matrix;       // symmetric part of the fitted linear map
    Vector eigenvalues;  // descending
    double determinant = 0.0;
    bool nonpositive = false;
};

struct JacobianOptions
{
    int k_neighbors = 0;       // 0 selects max(2n+2, 48)
    int max_anchors = 256;
    double condition_floor = 1e-8;
};

struct JacobianSurvey
{
    std::vector<LocalJacobian> jacobians;
    int skipped = 0;          // ill-conditioned fits
    double quality = 0.0;     // share of anchors with det within 25% of |L|/|K|
    double median_det = 0.0;
    double volume_ratio = 1.0;
    int k_neighbors = 0;
};

/// Weighted (tricube) least-squares affine fits of the map around interior
/// sources. A source is an anchor when its distance to ∂K exceeds the radius
/// of its k-neighbourhood.
inline JacobianSurvey local_jacobians(const DiscreteMap& map, const ConvexBody& K, const JacobianOptions& opt = {})
{
    const int n = map.dimension();
    const int k = opt.k_neighbors > 0 ? opt.k_neighbors : std::max(2 * n + 2, 48);
    if (k < 2 * n + 1) throw IllConditionedFit("need at least 2n+1 neighbours");
    const std::size_t m = map.size();
    if (m < static_cast<std::size_t>(k)) throw IllConditionedFit("fewer samples than neighbours");

    JacobianSurvey out;
    out.volume_ratio = map.volume_ratio;
    out.k_neighbors = k;
    const auto& facets = K.facets();
    auto depth = [&](const Vector& x) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& h : facets) d = std::min(d, h.offset - h.normal.dot(x));
        return d;
    };

    std::vector<std::pair<double, std::size_t>> dist(m);
    std::vector<std::size_t> anchors;
    std::vector<std::vector<std::pair<double, std::size_t>>> hoods;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t j = 0; j < m; ++j) dist[j] = {(map.sources[j] - map.sources[a]).squaredNorm(), j};
        std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
        std::vector<std::pair<double, std::size_t>> hood(dist.begin(), dist.begin() + k);
        double radius = 0.0;
        for (const auto& h : hood) radius = std::max(radius, h.first);
        if (depth(map.sources[a]) > std::sqrt(radius)) {
            anchors.push_back(a);
            hoods.push_back(std::move(hood));
        }
    }
    const std::size_t stride = std::max<std::size_t>(1, (anchors.size() + static_cast<std::size_t>(opt.max_anchors) - 1) /
                                                            static_cast<std::size_t>(opt.max_anchors));
    std::vector<double> dets;
    int good = 0;
    for (std::size_t t = 0; t < anchors.size(); t += stride) {
        const std::size_t a = anchors[t];
        const auto& hood = hoods[t];
        double rmax = 0.0;
        for (const auto& h : hood) rmax = std::max(rmax, std::sqrt(h.first));
        rmax *= 1.0 + 1e-6;
        Matrix X(k, n + 1), Y(k, n);
        for (int r = 0; r < k; ++r) {
            const std::size_t j = hood[static_cast<std::size_t>(r)].second;
            const double q = std::sqrt(hood[static_cast<std::size_t>(r)].first) / (rmax + 1e-300);
            const double w = std::sqrt(std::pow(1.0 - q * q * q, 3));
            X(r, 0) = w;
            X.row(r).tail(n) = w * (map.sources[j] - map.sources[a]).transpose();
            Y.row(r) = w * map.image(j).transpose();
        }
        Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) <= opt.condition_floor * s(0)) {
            ++out.skipped;
            continue;
        }
        const Matrix B = svd.solve(Y);
        const Matrix J = B.bottomRows(n).transpose();
        LocalJacobian lj;
        lj.anchor = map.sources[a];
        lj.matrix = 0.5 * (J + J.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(lj.matrix, Eigen::EigenvaluesOnly);
        lj.eigenvalues = es.eigenvalues().reverse();
        lj.determinant = lj.eigenvalues.prod();
        lj.nonpositive = lj.eigenvalues.minCoeff() <= 0.0;
        if (std::abs(lj.determinant / out.volume_ratio - 1.0) <= 0.25) ++good;
        dets.push_back(lj.determinant);
        out.jacobians.push_back(std::move(lj));
    }
    if (out.jacobians.empty()) throw IllConditionedFit("no interior anchor admitted a well-conditioned fit");
    out.quality = static_cast<double>(good) / static_cast<double>(out.jacobians.size());
    std::nth_element(dets.begin(), dets.begin() + static_cast<std::ptrdiff_t>(dets.size() / 2), dets.end());
    out.median_det = dets[dets.size() / 2];
    if (dets.size() % 2 == 0) {
        const double lower = *std::max_element(dets.begin(), dets.begin() + static_cast<std::ptrdiff_t>(dets.size() / 2));
        out.median_det = 0.5 * (out.median_det + lower);
    }
    return out;
}

/// Eigenvalues λ of ∇F at a point, the volume scale μ and the dilation ε.
struct ChainSample
{
    Vector eigenvalues;
    double mu = 1.0;
    double epsilon = 0.0;
};

/// One displayed inequality: `greater` ≥ `lesser` is claimed.
struct ChainStep
{
    std::string name;
    double greater = 0.0;
    double lesser = 0.0;
    double residual = 0.0;  // greater − lesser
    bool holds = true;
};

struct ChainReport
{
    double U = 0.0;  // Σ ε(λ_i − μ)² / (λ_i + μ)
    double V = 0.0;  // (Σ (λ_i − μ)²)^{1/2}
    double W = 0.0;  // Σ (λ_i + μ)
    double u = 0.0;  // (Π ελ_i/(1+ελ_i))^{1/(2n)}
    double v = 0.0;  // √(εμ/(1+εμ))
    double product_mismatch = 0.0;  // (Πλ_i)^{1/n}/μ − 1, zero under the Jacobian constraint
    std::vector<ChainStep> steps;
    bool all_hold = true;

    const ChainStep& step(const std::string& name) const
    {
        for (const auto& s : steps)
            if (s.name == name) return s;
        throw std::out_of_range("no chain step " + name);
    }
};

/// Evaluates every link of the eigenvalue chain that turns the stable AM-GM
/// bounds into a lower bound for Π(1 + ελ_i). Refuses samples outside
/// ελ_i ≤ 1/2, the regime where the root-ratio inequality applies.
inline ChainReport chain_evaluate(const ChainSample& s, double tol = 1e-12)
{
    const auto n = s.eigenvalues.size();
    const double dn = static_cast<double>(n);
    if (n < 1) throw OutOfRegime("no eigenvalues");
    if (!(s.mu > 0.0) || !(s.epsilon > 0.0)) throw OutOfRegime("μ and ε must be positive");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(s.eigenvalues(i) > 0.0)) throw OutOfRegime("eigenvalues must be positive");
        if (s.epsilon * s.eigenvalues(i) > 0.5) throw OutOfRegime("ε λ_i exceeds 1/2");
    }
    const double eps = s.epsilon, mu = s.mu;
    const Vector el = eps * s.eigenvalues;
    const Vector p = el.array() / (1.0 + el.array());
    const Vector q = 1.0 / (1.0 + el.array());
    const Vector rp = p.array().sqrt();
    auto gm = [&](const Vector& a) { return std::exp(a.array().log().sum() / dn); };

    ChainReport r;
    r.U = (eps * (s.eigenvalues.array() - mu).square() / (s.eigenvalues.array() + mu)).sum();
    r.V = std::sqrt((s.eigenvalues.array() - mu).square().sum());
    r.W = (s.eigenvalues.array() + mu).sum();
    r.u = std::sqrt(gm(p));
    r.v = std::sqrt(eps * mu / (1.0 + eps * mu));
    r.product_mismatch = gm(s.eigenvalues) / mu - 1.0;

    const double dev_u = (rp.array() - r.u).square().sum();
    const double dev_v = (rp.array() - r.v).square().sum();
    const double root_sum = rp.sum();
    const double prod_root = std::exp((1.0 + el.array()).log().sum() / dn);  // Π(1+ελ_i)^{1/n}
    const double ratio = (1.0 + eps * mu) / prod_root;
    const double sbar = r.U / (2.1 * dn);

    auto add = [&](std::string name, double greater, double lesser) {
        ChainStep st{std::move(name), greater, lesser, greater - lesser, true};
        st.holds = st.residual >= -tol * std::max({1.0, std::abs(greater), std::abs(lesser)});
        r.all_hold = r.all_hold && st.holds;
        r.steps.push_back(std::move(st));
    };
    add("root_gap", p.sum() / dn - dev_u / dn, gm(p));
    add("reciprocal_amgm", q.sum() / dn, gm(q));
    add("summed", 1.0 - dev_u / dn, ratio);
    add("summed_unit", 1.0, 1.0 - dev_u / dn);
    add("v_over_u", r.v, r.u);
    add("u_to_v", dev_u, dev_v);
    add("doubled_root_sum", 2.0 * root_sum, dn * (r.u + r.v));
    add("root_amgm", root_sum, dn * r.u);
    add("root_ratio", root_sum, dn * r.v);
    add("combined", 1.0 - dev_v / dn, ratio);
    add("simplified", 1.0 - sbar, ratio);
    const double base = std::pow(1.0 + eps * mu, dn);
    const double prod = std::exp((1.0 + el.array()).log().sum());
    add("bernoulli_reciprocal", prod, sbar < 1.0 ? base * std::pow(1.0 / (1.0 - sbar), dn)
                                                 : std::numeric_limits<double>::infinity());
    add("bernoulli_power", sbar < 1.0 ? base * std::pow(1.0 / (1.0 - sbar), dn) : std::numeric_limits<double>::infinity(),
        base * std::pow(1.0 + sbar, dn));
    add("bernoulli_linear", base * std::pow(1.0 + sbar, dn), base * (1.0 + r.U / 2.1));
    add("schwarz_w", std::sqrt(dn) * r.V + 2.0 * dn * mu, r.W);
    add("schwarz_uw", r.U * r.W, eps * std::pow((s.eigenvalues.array() - mu).abs().sum(), 2));
    return r;
}

/// Triangulated planar polygon. `boundary` lists the boundary edges.
struct PlanarMesh
{
    std::vector<Vector> points;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> boundary;
};

/// Vertices of a planar body in counter-clockwise order.
inline std::vector<Vector> polygon_ring(const ConvexBody& K)
{
    if (K.dimension() != 2) throw NotTwoDimensional("polygon expected");
    std::vector<Vector> ring;
    const double tol = K.tolerance();
    for (const auto& v : K.vertices()) {
        int tight = 0;
        for (const auto& h : K.facets())
            if (std::abs(h.normal.dot(v) - h.offset) <= 10.0 * tol) ++tight;
        if (tight >= 2) ring.push_back(v);
    }
    const Vector c = K.centroid();
    std::sort(ring.begin(), ring.end(), [&](const Vector& a, const Vector& b) {
        return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
    });
    return ring;
}

/// Fan triangulation of K about `center`, each fan triangle split into m²
/// congruent pieces with m chosen so every edge is at most max_edge.
inline PlanarMesh refine_polygon(const ConvexBody& K, const Vector& center, double max_edge)
{
    const auto ring = polygon_ring(K);
    const int N = static_cast<int>(ring.size());
    double longest = 0.0;
    for (int i = 0; i < N; ++i) {
        const Vector& a = ring[static_cast<std::size_t>(i)];
        const Vector& b = ring[static_cast<std::size_t>((i + 1) % N)];
        longest = std::max({longest, (a - b).norm(), (a - center).norm()});
    }
    const int m = std::max(1, static_cast<int>(std::ceil(longest / max_edge)));
    PlanarMesh mesh;
    std::map<std::array<int, 3>, int> index;
    // Key: {kind, a, b}. kind 0 centre, 1 on the ray to vertex a at step b,
    // 2 inside fan triangle a at barycentric (b, ·), handled with a third slot.
    auto point_id = [&](int tri, int i, int j) {
        // i steps towards ring[tri], j towards ring[tri+1], m−i−j at the centre
        std::array<int, 3> key;
        if (i == 0 && j == 0) key = {0, 0, 0};
        else if (j == 0) key = {1, tri, i};
        else if (i == 0) key = {1, (tri + 1) % N, j};
        else key = {2 + tri, i, j};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        const Vector& a = ring[static_cast<std::size_t>(tri)];
        const Vector& b = ring[static_cast<std::size_t>((tri + 1) % N)];
        Vector p;
        if (key[0] == 0) p = center;
        else if (key[0] == 1) p = center + (static_cast<double>(key[2]) / m) * (ring[static_cast<std::size_t>(key[1])] - center);
        else p = center + (static_cast<double>(i) / m) * (a - center) + (static_cast<double>(j) / m) * (b - center);
        const int id = static_cast<int>(mesh.points.size());
        mesh.points.push_back(p);
        index.emplace(key, id);
        return id;
    };
    for (int t = 0; t < N; ++t) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; i + j < m; ++j) {
                mesh.triangles.push_back({point_id(t, i, j), point_id(t, i + 1, j), point_id(t, i, j + 1)});
                if (i + j + 1 < m)
                    mesh.triangles.push_back({point_id(t, i + 1, j), point_id(t, i + 1, j + 1), point_id(t, i, j + 1)});
            }
        for (int s = 0; s < m; ++s) mesh.boundary.push_back({point_id(t, m - s, s), point_id(t, m - s - 1, s + 1)});
    }
    return mesh;
}

struct TraceCheck
{
    double lhs = 0.0;                // (C_0 n R / 2r) ∫_K |∇f|
    double rhs = 0.0;                // inf_c ∫_∂K |f − c|
    double gradient_integral = 0.0;  // ∫_K |∇f|
    double median = 0.0;             // minimizing c
    double r = 0.0;
    double R = 0.0;
    bool holds = true;
};

namespace detail {

/// inf_c ∫ |f − c| over a polyline on which f is linear per segment. The
/// minimizer is the arc-length median of f.
inline double boundary_l1_median(const std::vector<std::array<double, 3>>& segs, double* c_out)
{
    // segs: {f_a, f_b, length}
    std::vector<double> breaks;
    double total = 0.0;
    for (const auto& s : segs) {
        breaks.push_back(s[0]);
        breaks.push_back(s[1]);
        total += s[2];
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    auto below = [&](double c, bool inclusive) {
        double g = 0.0;
        for (const auto& s : segs) {
            const double lo = std::min(s[0], s[1]), hi = std::max(s[0], s[1]);
            if (hi == lo) {
                if (inclusive ? lo <= c : lo < c) g += s[2];
            } else {
                g += s[2] * std::clamp((c - lo) / (hi - lo), 0.0, 1.0);
            }
        }
        return g;
    };
    const double half = 0.5 * total;
    double c = breaks.front();
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        if (below(breaks[k], true) >= half) {
            const double left = below(breaks[k], false);
            if (left >= half && k > 0) {
                // Crossing happens strictly inside (breaks[k−1], breaks[k]) where G is linear.
                const double g0 = below(breaks[k - 1], true);
                c = breaks[k - 1] + (half - g0) / (left - g0) * (breaks[k] - breaks[k - 1]);
            } else {
                c = breaks[k];
            }
            break;
        }
    }
    double integral = 0.0;
    for (const auto& s : segs) {
        const double a = s[0] - c, b = s[1] - c;
        if ((a >= 0.0 && b >= 0.0) || (a <= 0.0 && b <= 0.0)) {
            integral += s[2] * std::abs(0.5 * (a + b));
        } else {
            integral += s[2] * (a * a + b * b) / (2.0 * std::abs(b - a));
        }
    }
    if (c_out) *c_out = c;
    return integral;
}

} // namespace detail

/// Both sides of the planar trace inequality for the piecewise-linear f with
/// the given vertex values, B_r and B_R the inscribed and enclosing balls.
inline TraceCheck trace_inequality_check(const ConvexBody& K, const PlanarMesh& mesh, const std::vector<double>& values)
{
    if (K.dimension() != 2) throw NotTwoDimensional("the trace check is planar");
    if (values.size() != mesh.points.size()) throw DimensionMismatch("one value per mesh vertex expected");
    TraceCheck out;
    out.r = chebyshev_ball(K).radius;
    out.R = enclosing_ball(K).radius;
    for (const auto& t : mesh.triangles) {
        const Vector& a = mesh.points[static_cast<std::size_t>(t[0])];
        const Vector e1 = mesh.points[static_cast<std::size_t>(t[1])] - a;
        const Vector e2 = mesh.points[static_cast<std::size_t>(t[2])] - a;
        const double det = e1(0) * e2(1) - e1(1) * e2(0);
        if (det == 0.0) continue;
        const double d1 = values[static_cast<std::size_t>(t[1])] - values[static_cast<std::size_t>(t[0])];
        const double d2 = values[static_cast<std::size_t>(t[2])] - values[static_cast<std::size_t>(t[0])];
        // ∇f solves [e1 e2]^T g = (d1, d2)
        const double gx = (d1 * e2(1) - d2 * e1(1)) / det;
        const double gy = (e1(0) * d2 - e2(0) * d1) / det;
        out.gradient_integral += 0.5 * std::abs(det) * std::hypot(gx, gy);
    }
    std::vector<std::array<double, 3>> segs;
    for (const auto& e : mesh.boundary)
        segs.push_back({values[static_cast<std::size_t>(e[0])], values[static_cast<std::size_t>(e[1])],
                        (mesh.points[static_cast<std::size_t>(e[0])] - mesh.points[static_cast<std::size_t>(e[1])]).norm()});
    out.rhs = detail::boundary_l1_median(segs, &out.median);
    out.lhs = kTraceConstant * 2.0 * out.R / (2.0 * out.r) * out.gradient_integral;
    out.holds = out.lhs >= out.rhs * (1.0 - 1e-12);
    return out;
}

/// As above with f sampled at the vertices of a mesh refined to edge length R/32.
inline TraceCheck trace_inequality_check(const ConvexBody& K, const std::function<double(const Vector&)>& f)
{
    if (K.dimension() != 2) throw NotTwoDimensional("the trace check is planar");
    const auto mesh = refine_polygon(K, chebyshev_ball(K).center, enclosing_ball(K).radius / 32.0);
    std::vector<double> values;
    values.reserve(mesh.points.size());
    for (const auto& p : mesh.points) values.push_back(f(p));
    return trace_inequality_check(K, mesh, values);
}

/// Sample i of the randomized chain suite: n from 2..10, λ log-uniform on
/// [1e-2, 1e2], μ their geometric mean, ε uniform below 1/(2 max λ).
inline ChainSample chain_sample(RngSeed seed, std::size_t i)
{
    CounterRng rng(seed.derive(i));
    const int n = static_cast<int>(rng.integer(2, 10));
    ChainSample s;
    s.eigenvalues.resize(n);
    for (int k = 0; k < n; ++k) s.eigenvalues(k) = std::pow(10.0, rng.uniform(-2.0, 2.0));
    s.mu = std::exp(s.eigenvalues.array().log().mean());
    s.epsilon = rng.uniform(1e-6, 1.0) / (2.0 * s.eigenvalues.maxCoeff());
    return s;
}

struct ChainSuiteReport
{
    std::size_t count = 0;
    std::size_t violations = 0;  // of the combined bound
    std::vector<std::pair<std::string, std::size_t>> step_failures;  // every step, in chain order
    double min_combined_residual = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> first_violations;
};

inline ChainSuiteReport chain_suite(std::size_t count, RngSeed seed, double tol = 1e-12)
{
    ChainSuiteReport rep;
    rep.count = count;
    for (std::size_t i = 0; i < count; ++i) {
        const auto r = chain_evaluate(chain_sample(seed, i), tol);
        if (rep.step_failures.empty())
            for (const auto& st : r.steps) rep.step_failures.emplace_back(st.name, 0);
        for (std::size_t k = 0; k < r.steps.size(); ++k)
            if (!r.steps[k].holds) ++rep.step_failures[k].second;
        const auto& c = r.step("combined");
        rep.min_combined_residual = std::min(rep.min_combined_residual, c.residual);
        if (!c.holds) {
            ++rep.violations;
            if (rep.first_violations.size() < 10) rep.first_violations.push_back(i);
        }
    }
    return rep;
}

/// Instance i of the randomized trace suite: a random polygon with 3..12
/// points (every other one symmetric) and a piecewise-linear function with
/// uniform nodal values on its refined fan mesh.
inline TraceCheck trace_instance(RngSeed seed, std::size_t i)
{
    CounterRng rng(seed.derive(i).derive(0));
    const auto K = random_body(2, static_cast<int>(rng.integer(3, 12)), i % 2 == 1, seed.derive(i).derive(1));
    const auto mesh = refine_polygon(K, chebyshev_ball(K).center, enclosing_ball(K).radius / 32);
    std::vector<double> f(mesh.points.size());
    for (auto& x : f) x = rng.uniform(-1.0, 1.0);
    return trace_inequality_check(K, mesh, f);
}

struct TraceSuiteReport
{
    std::size_t count = 0;
    std::size_t violations = 0;
    double min_ratio = std::numeric_limits<double>::infinity();  // lhs / rhs
    std::vector<std::size_t> first_violations;
};

inline TraceSuiteReport trace_suite(std::size_t count, RngSeed seed)
{
    TraceSuiteReport rep;
    rep.count = count;
    for (std::size_t i = 0; i < count; ++i) {
        const auto t = trace_instance(seed, i);
        if (t.rhs > 0.0) rep.min_ratio = std::min(rep.min_ratio, t.lhs / t.rhs);
        if (!t.holds) {
            ++rep.violations;
            if (rep.first_violations.size() < 10) rep.first_violations.push_back(i);
        }
    }
    return rep;
}

struct GradientBoundCheck
{
    double asymmetry = 0.0;      // A(K, L)
    double bound = 0.0;          // C_0 n q / μ · mean |J − μI|_F
    double ratio = 0.0;          // bound / asymmetry (infinite when A = 0 < bound)
    double mean_deviation = 0.0; // mean Frobenius |J − μI|
    double mu = 1.0;
    double q_upper = 1.0;
    bool holds = true;
};

/// A(K, L) against the transport gradient bound, ∫_K averaged over the
/// interior anchors of the fitted Jacobians.
inline GradientBoundCheck asymmetry_gradient_bound_check(const ConvexBody& K, const ConvexBody& L, const DiscreteMap& map,
                                                         const JacobianOptions& jopt = {},
                                                         const OverlapSearchOptions& sopt = {})
{
    const int n = K.dimension();
    GradientBoundCheck out;
    out.mu = std::pow(volume(L) / volume(K), 1.0 / n);
    out.q_upper = inverse_roundness(K).q_upper;
    const auto survey = local_jacobians(map, K, jopt);
    double dev = 0.0;
    for (const auto& j : survey.jacobians) dev += (j.matrix - out.mu * Matrix::Identity(n, n)).norm();
    out.mean_deviation = dev / static_cast<double>(survey.jacobians.size());
    out.bound = kTraceConstant * n * out.q_upper * out.mean_deviation / out.mu;
    out.asymmetry = relative_asymmetry(K, L, sopt).asymmetry;
    out.ratio = out.asymmetry > 0.0 ? out.bound / out.asymmetry
                                    : (out.bound > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    out.holds = out.bound >= out.asymmetry;
    return out;
}

} // namespace wulff
