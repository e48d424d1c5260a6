#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wulff/body.hpp"
#include "wulff/ellipsoid.hpp"
#include "wulff/functionals.hpp"
#include "wulff/meanineq.hpp"

namespace wulff {

/// Worker count for the lab sweeps: WULFF_LAB_THREADS if set to a positive
/// integer, otherwise the hardware concurrency.
inline int lab_threads()
{
    if (const char* env = std::getenv("WULFF_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 256));
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

/// Runs task(i) for i in [0, count). Each index is handled exactly once, so
/// tasks writing only to slot i give the same result for any thread count.
/// The first exception thrown by a task is rethrown after all workers stop.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task, int threads = 0)
{
    if (threads <= 0) threads = lab_threads();
    threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    std::atomic<bool> stop{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || stop.load()) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(error_lock);
                if (!error) error = std::current_exception();
                stop = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

enum class InequalityKind { isoperimetric, isoperimetric_dimensional, brunn_minkowski, wulff, bm_classic, dar };

inline const char* to_string(InequalityKind k)
{
    switch (k) {
    case InequalityKind::isoperimetric: return "isoperimetric";
    case InequalityKind::isoperimetric_dimensional: return "isoperimetric-dimensional";
    case InequalityKind::brunn_minkowski: return "brunn-minkowski";
    case InequalityKind::wulff: return "wulff";
    case InequalityKind::bm_classic: return "bm-classic";
    case InequalityKind::dar: return "dar";
    }
    return "unknown";
}

/// Constant in the quantitative isoperimetric bound: 100 n⁴ q² for the body
/// at hand, 100 n⁶ in general, 100 n⁵ for centrally symmetric bodies.
enum class ConstantMode { body_specific, general, symmetric };

inline const char* to_string(ConstantMode m)
{
    switch (m) {
    case ConstantMode::body_specific: return "body-specific";
    case ConstantMode::general: return "general";
    case ConstantMode::symmetric: return "symmetric";
    }
    return "unknown";
}

/// One inequality evaluated on concrete bodies. The claim is lhs ≥ rhs; pass
/// allows the stated tolerance. For the quantitative forms `ratio` is the
/// required deficit over the available one (≤ 1 when the bound holds).
struct InequalityReport
{
    InequalityKind kind = InequalityKind::wulff;
    std::string mode;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double constant_used = 0.0;
    double q_used = 1.0;
    double asymmetry = 0.0;
    double deficit = 0.0;
    double sigma = 1.0;
    double tolerance = 0.0;
    std::vector<std::string> inputs;
    RngSeed seed{};
    bool pass = true;
};

/// Volumes, perimeter, asymmetry, roundness and Brunn-Minkowski data of a pair,
/// computed once and shared by every report on that pair.
struct PairMeasurements
{
    int n = 0;
    std::string label_k, label_l;
    double vol_k = 0.0, vol_l = 0.0;
    double perimeter = 0.0;   // P_L(K)
    double wulff = 0.0;       // n |K|^{(n-1)/n} |L|^{1/n}
    double deficit = 0.0;     // δ
    double asymmetry = 0.0;   // A(K, L)
    double q_upper = 1.0;
    double beta = 0.0;
    double sigma = 1.0;       // max(|K|/|L|, |L|/|K|)
    bool symmetric_k = false;
    bool converged = true;
    bool has_bm = false;
};

/// K equals its reflection through the centroid, vertex for vertex.
inline bool centrally_symmetric(const ConvexBody& K, double rel_tol = 1e-7)
{
    const Vector c = K.centroid();
    const double tol = rel_tol * (1.0 + enclosing_ball(K).radius);
    for (const auto& v : K.vertices()) {
        const Vector w = 2.0 * c - v;
        bool found = false;
        for (const auto& u : K.vertices())
            if ((u - w).norm() <= tol) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

inline PairMeasurements measure_pair(const ConvexBody& K, const ConvexBody& L, bool with_bm = true,
                                     const OverlapSearchOptions& opt = {})
{
    if (K.dimension() != L.dimension()) throw DimensionMismatch("pair of bodies of different dimension");
    PairMeasurements m;
    m.n = K.dimension();
    m.label_k = K.label();
    m.label_l = L.label();
    m.vol_k = volume(K);
    m.vol_l = volume(L);
    m.perimeter = anisotropic_perimeter(K, L);
    m.wulff = wulff_bound(K, L);
    m.deficit = m.perimeter / m.wulff - 1.0;
    const auto a = relative_asymmetry(K, L, opt);
    m.asymmetry = a.asymmetry;
    m.sigma = a.sigma;
    m.converged = a.converged;
    m.q_upper = inverse_roundness(K).q_upper;
    m.symmetric_k = centrally_symmetric(K);
    if (with_bm) {
        m.beta = bm_deficit(K, L);
        m.has_bm = true;
    }
    return m;
}

inline double isoperimetric_constant(int n, ConstantMode mode, double q)
{
    const double dn = n;
    switch (mode) {
    case ConstantMode::body_specific: return 100.0 * std::pow(dn, 4) * q * q;
    case ConstantMode::general: return 100.0 * std::pow(dn, 6);
    case ConstantMode::symmetric: return 100.0 * std::pow(dn, 5);
    }
    return 0.0;
}

inline double bm_constant(int n) { return 400.0 * std::pow(static_cast<double>(n), 6); }

namespace detail {

inline InequalityReport quantitative(InequalityKind kind, double lhs, double rhs, double need, double have, double tol)
{
    InequalityReport r;
    r.kind = kind;
    r.lhs = lhs;
    r.rhs = rhs;
    r.tolerance = tol;
    r.pass = lhs >= rhs - tol;
    const double room = have + tol;
    r.ratio = need == 0.0 ? 0.0 : (room > 0.0 ? need / room : std::numeric_limits<double>::infinity());
    return r;
}

} // namespace detail

/// P_L(K) ≥ n|K|^{(n-1)/n}|L|^{1/n} (1 + A²/C) for the chosen constant.
inline InequalityReport isoperimetric_report(const PairMeasurements& m, ConstantMode mode, double rel_tol = 1e-10)
{
    if (mode == ConstantMode::symmetric && !m.symmetric_k)
        throw NotCentrallySymmetric("symmetric constant needs a centrally symmetric body");
    const double C = isoperimetric_constant(m.n, mode, m.q_upper);
    const double need = m.asymmetry * m.asymmetry / C;
    const double rhs = m.wulff * (1.0 + need);
    const double tol = rel_tol * rhs;
    auto r = detail::quantitative(
        mode == ConstantMode::body_specific ? InequalityKind::isoperimetric : InequalityKind::isoperimetric_dimensional,
        m.perimeter, rhs, need, m.deficit, tol / m.wulff);
    r.pass = m.perimeter >= rhs - tol;
    r.mode = to_string(mode);
    r.constant_used = C;
    r.q_used = m.q_upper;
    r.asymmetry = m.asymmetry;
    r.deficit = m.deficit;
    r.sigma = m.sigma;
    r.tolerance = tol;
    r.inputs = {m.label_k, m.label_l};
    return r;
}

/// β ≥ A²/(400 n⁶ σ^{1/n}).
inline InequalityReport bm_report(const PairMeasurements& m, double tol = 1e-12)
{
    if (!m.has_bm) throw DegenerateInput("pair measured without the Brunn-Minkowski deficit");
    const double C = bm_constant(m.n);
    const double need = m.asymmetry * m.asymmetry / (C * std::pow(m.sigma, 1.0 / m.n));
    auto r = detail::quantitative(InequalityKind::brunn_minkowski, m.beta, need, need, m.beta, tol);
    r.mode = "general";
    r.constant_used = C;
    r.q_used = m.q_upper;
    r.asymmetry = m.asymmetry;
    r.deficit = m.beta;
    r.sigma = m.sigma;
    r.inputs = {m.label_k, m.label_l};
    return r;
}

inline InequalityReport verify_isoperimetric(const ConvexBody& K, const ConvexBody& L, ConstantMode mode,
                                             const OverlapSearchOptions& opt = {})
{
    if (mode == ConstantMode::symmetric && !centrally_symmetric(K))
        throw NotCentrallySymmetric("symmetric constant needs a centrally symmetric body");
    return isoperimetric_report(measure_pair(K, L, false, opt), mode);
}

inline InequalityReport verify_bm(const ConvexBody& K, const ConvexBody& L, const OverlapSearchOptions& opt = {})
{
    return bm_report(measure_pair(K, L, true, opt));
}

/// Plain Wulff inequality P_L(K) ≥ n|K|^{(n-1)/n}|L|^{1/n}.
inline InequalityReport verify_wulff(const ConvexBody& K, const ConvexBody& L, double rel_tol = 1e-9)
{
    InequalityReport r;
    r.kind = InequalityKind::wulff;
    r.lhs = anisotropic_perimeter(K, L);
    r.rhs = wulff_bound(K, L);
    r.deficit = r.lhs / r.rhs - 1.0;
    r.tolerance = rel_tol * r.rhs;
    r.pass = r.lhs >= r.rhs - r.tolerance;
    r.inputs = {K.label(), L.label()};
    return r;
}

/// |K+L|^{1/n} ≥ |K|^{1/n} + |L|^{1/n}.
inline InequalityReport verify_bm_classic(const ConvexBody& K, const ConvexBody& L, double rel_tol = 1e-12)
{
    const double n = K.dimension();
    InequalityReport r;
    r.kind = InequalityKind::bm_classic;
    r.lhs = std::pow(volume(minkowski_sum(K, L)), 1.0 / n);
    r.rhs = std::pow(volume(K), 1.0 / n) + std::pow(volume(L), 1.0 / n);
    r.deficit = r.lhs / r.rhs - 1.0;
    r.tolerance = rel_tol * r.rhs;
    r.pass = r.lhs >= r.rhs - r.tolerance;
    r.inputs = {K.label(), L.label()};
    return r;
}

/// |K+L|^{1/n} ≥ M^{1/n} + |K|^{1/n}|L|^{1/n}/M^{1/n}, M the maximal overlap of
/// K with a translate of L. Proven in the plane; evaluated in any dimension.
inline InequalityReport verify_dar(const ConvexBody& K, const ConvexBody& L, double abs_tol = 1e-6,
                                   const OverlapSearchOptions& opt = {})
{
    const double n = K.dimension();
    const double M = dar_overlap(K, L, opt).volume;
    InequalityReport r;
    r.kind = InequalityKind::dar;
    r.lhs = std::pow(volume(minkowski_sum(K, L)), 1.0 / n);
    const double m = std::pow(M, 1.0 / n);
    r.rhs = m + std::pow(volume(K), 1.0 / n) * std::pow(volume(L), 1.0 / n) / m;
    r.deficit = r.lhs - r.rhs;
    r.tolerance = abs_tol;
    r.pass = r.lhs >= r.rhs - abs_tol;
    r.inputs = {K.label(), L.label()};
    return r;
}

/// The isoperimetric-to-Brunn-Minkowski derivation evaluated on a pair:
/// perimeter additivity on M = K+L, the asymmetry triangle inequality through
/// M, the weighted sum of the two isoperimetric bounds, and the final bound
/// with four times the dimensional constant.
struct DerivationReport
{
    double perimeter_k = 0.0;      // P_K(M)
    double perimeter_l = 0.0;      // P_L(M)
    double perimeter_m = 0.0;      // P_M(M)
    double n_volume_m = 0.0;       // n |M|
    double additivity_residual = 0.0;  // |P_K + P_L − P_M| / P_M
    double equality_residual = 0.0;    // |P_M − n|M|| / (n|M|)
    double a_kl = 0.0, a_mk = 0.0, a_ml = 0.0;
    double triangle_slack = 0.0;   // A(M,K) + A(M,L) − A(K,L)
    double beta = 0.0;
    double sigma = 1.0;
    double weighted_bound = 0.0;   // (1/C)(w_K A(M,K)² + w_L A(M,L)²)
    double half_bound = 0.0;       // (1/C)(A(M,K)² + A(M,L)²)/(2σ^{1/n})
    double final_bound = 0.0;      // A(K,L)²/(4 C σ^{1/n})
    double constant = 0.0;         // C = 100 n⁶
    InequalityReport iso_mk, iso_ml;
    bool additivity_ok = true;
    bool triangle_ok = true;
    bool chain_ok = true;
    bool pass = true;
};

inline DerivationReport derive_bm_from_iso(const ConvexBody& K, const ConvexBody& L, double optimizer_tol = 1e-6,
                                           const OverlapSearchOptions& opt = {})
{
    const int n = K.dimension();
    const double dn = n;
    const ConvexBody M = minkowski_sum(K, L);
    DerivationReport d;
    d.perimeter_k = anisotropic_perimeter(M, K);
    d.perimeter_l = anisotropic_perimeter(M, L);
    d.perimeter_m = anisotropic_perimeter(M, M);
    d.n_volume_m = dn * volume(M);
    d.additivity_residual = std::abs(d.perimeter_k + d.perimeter_l - d.perimeter_m) / d.perimeter_m;
    d.equality_residual = std::abs(d.perimeter_m - d.n_volume_m) / d.n_volume_m;
    d.additivity_ok = d.additivity_residual < 1e-9 && d.equality_residual < 1e-9;

    const auto mk = measure_pair(M, K, false, opt);
    const auto ml = measure_pair(M, L, false, opt);
    d.iso_mk = isoperimetric_report(mk, ConstantMode::general);
    d.iso_ml = isoperimetric_report(ml, ConstantMode::general);
    d.a_mk = mk.asymmetry;
    d.a_ml = ml.asymmetry;
    const auto kl = relative_asymmetry(K, L, opt);
    d.a_kl = kl.asymmetry;
    d.triangle_slack = d.a_mk + d.a_ml - d.a_kl;
    d.triangle_ok = d.triangle_slack >= -2.0 * optimizer_tol;

    d.beta = bm_deficit(K, L);
    d.sigma = kl.sigma;
    d.constant = isoperimetric_constant(n, ConstantMode::general, 1.0);
    const double rk = std::pow(volume(K), 1.0 / dn), rl = std::pow(volume(L), 1.0 / dn);
    const double s = std::pow(d.sigma, 1.0 / dn);
    d.weighted_bound = (rk * d.a_mk * d.a_mk + rl * d.a_ml * d.a_ml) / ((rk + rl) * d.constant);
    d.half_bound = (d.a_mk * d.a_mk + d.a_ml * d.a_ml) / (2.0 * s * d.constant);
    d.final_bound = d.a_kl * d.a_kl / (4.0 * d.constant * s);
    const double tol = 1e-12;
    d.chain_ok = d.beta >= d.weighted_bound - tol && d.weighted_bound >= d.half_bound - tol &&
                 (d.half_bound >= d.final_bound - tol || !d.triangle_ok);
    d.pass = d.additivity_ok && d.triangle_ok && d.chain_ok && d.iso_mk.pass && d.iso_ml.pass &&
             d.beta >= d.final_bound - tol;
    return d;
}

/// K = [0,1]^n, L = [0,1]^m × [0,1+ε]^{n−m} with m = ⌊n/2⌋, in closed form.
struct BoxRow
{
    int n = 0;
    int m = 0;
    double epsilon = 0.0;
    double beta = 0.0;
    double asymmetry = 0.0;
    double sigma = 1.0;
    double c_lower = 0.0;  // A² / (β σ^{1/n})
};

inline BoxRow box_pair_row(int n, double eps, int m = -1)
{
    if (m < 0) m = n / 2;
    const double dn = n;
    const double alpha = static_cast<double>(n - m) / dn;
    BoxRow r;
    r.n = n;
    r.m = m;
    r.epsilon = eps;
    // |K+L|^{1/n} = 2 (1+ε/2)^α, |L|^{1/n} = (1+ε)^α, |K| = 1.
    const double a = alpha * std::log1p(0.5 * eps);
    const double b = alpha * std::log1p(eps);
    r.beta = (2.0 * std::expm1(a) - std::expm1(b)) / (2.0 + std::expm1(b));
    // λ = (1+ε)^{−α}; the corner-aligned overlap is λ^m.
    r.asymmetry = -2.0 * std::expm1(-alpha * m * std::log1p(eps));
    r.sigma = std::exp((n - m) * std::log1p(eps));
    r.c_lower = r.asymmetry * r.asymmetry / (r.beta * std::pow(r.sigma, 1.0 / dn));
    return r;
}

/// Neville extrapolation of (x_i, y_i) to x = 0.
inline double extrapolate_to_zero(std::vector<double> x, std::vector<double> y)
{
    const std::size_t k = x.size();
    if (k == 0) throw DegenerateInput("nothing to extrapolate");
    for (std::size_t level = 1; level < k; ++level)
        for (std::size_t i = 0; i + level < k; ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y[0];
}

struct BoxLimit
{
    int n = 0;
    int m = 0;
    double c_limit = 0.0;        // extrapolated ε → 0
    double asymmetry_slope = 0.0;  // A/(nε) extrapolated ε → 0
};

struct ExperimentTable
{
    std::vector<BoxRow> rows;
    std::vector<BoxLimit> limits;
    double fitted_exponent = 0.0;
    double exponent_stderr = 0.0;
    double exponent_low = 0.0;   // ± two standard errors
    double exponent_high = 0.0;
};

inline ExperimentTable box_conjecture_experiment(const std::vector<int>& n_range, std::vector<double> epsilons)
{
    for (int n : n_range)
        if (n < 2 || n > 12) throw DegenerateInput("box experiment dimensions must lie in 2..12");
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 0.5)) throw DegenerateInput("box experiment epsilons must lie in (0, 0.5]");
    if (epsilons.empty()) throw DegenerateInput("no epsilons");
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
    epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());

    ExperimentTable t;
    std::vector<double> lx, ly;
    for (int n : n_range) {
        std::vector<double> cs, slopes;
        for (double e : epsilons) {
            const auto row = box_pair_row(n, e);
            t.rows.push_back(row);
            cs.push_back(row.c_lower);
            slopes.push_back(row.asymmetry / (n * e));
        }
        BoxLimit lim;
        lim.n = n;
        lim.m = n / 2;
        lim.c_limit = extrapolate_to_zero(epsilons, cs);
        lim.asymmetry_slope = extrapolate_to_zero(epsilons, slopes);
        t.limits.push_back(lim);
        if (n <= 10) {
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(lim.c_limit));
        }
    }
    if (lx.size() >= 2) {
        const double k = static_cast<double>(lx.size());
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i] / k;
            my += ly[i] / k;
        }
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        t.fitted_exponent = sxy / sxx;
        double ss = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            const double e = ly[i] - my - t.fitted_exponent * (lx[i] - mx);
            ss += e * e;
        }
        t.exponent_stderr = lx.size() > 2 ? std::sqrt(ss / (k - 2.0) / sxx) : 0.0;
        t.exponent_low = t.fitted_exponent - 2.0 * t.exponent_stderr;
        t.exponent_high = t.fitted_exponent + 2.0 * t.exponent_stderr;
    }
    return t;
}

inline std::string to_csv(const ExperimentTable& t)
{
    std::ostringstream os;
    os.precision(17);
    os << "n,m,epsilon,beta,asymmetry,sigma,c_lower\n";
    for (const auto& r : t.rows)
        os << r.n << ',' << r.m << ',' << r.epsilon << ',' << r.beta << ',' << r.asymmetry << ',' << r.sigma << ','
           << r.c_lower << '\n';
    return os.str();
}

/// Pair i of the randomized verifier corpus: K from n+4 Gaussian points (or
/// the symmetric hull of n+1 points and their negatives), L from n+3 points.
inline std::pair<ConvexBody, ConvexBody> corpus_pair(int n, RngSeed seed, std::size_t i, bool symmetric_k)
{
    auto K = symmetric_k ? random_body(n, n + 1, true, seed.derive(2 * i)) : random_body(n, n + 4, false, seed.derive(2 * i));
    auto L = random_body(n, n + 3, false, seed.derive(2 * i + 1));
    return {std::move(K), std::move(L)};
}

struct Quantiles
{
    double min = 0.0, q01 = 0.0, median = 0.0, q99 = 0.0, max = 0.0;
};

inline Quantiles quantiles(std::vector<double> v)
{
    Quantiles q;
    if (v.empty()) return q;
    std::sort(v.begin(), v.end());
    auto at = [&](double p) { return v[static_cast<std::size_t>(p * static_cast<double>(v.size() - 1))]; };
    q.min = v.front();
    q.q01 = at(0.01);
    q.median = at(0.5);
    q.q99 = at(0.99);
    q.max = v.back();
    return q;
}

/// Tuple i of a suite: length n (2..16 drawn at random when n is 0), entries
/// log-uniform on [1e-6, 1e6], each zero with probability 1/64.
inline std::vector<double> suite_tuple(int n, RngSeed seed, std::size_t i)
{
    CounterRng rng(seed.derive(i));
    const int len = n > 0 ? n : static_cast<int>(rng.integer(2, 16));
    std::vector<double> x(static_cast<std::size_t>(len));
    for (auto& v : x) {
        v = std::pow(10.0, rng.uniform(-6.0, 6.0));
        if (rng.uniform() < 1.0 / 64.0) v = 0.0;
    }
    return x;
}

struct SuiteViolation
{
    std::size_t index = 0;
    std::vector<double> tuple;
    std::string which;
    double residual = 0.0;
};

/// Randomized check of AM − GM ≥ defect for the root, ratio and pairwise
/// defects. Residuals are relative to the largest entry.
struct AmgmSuiteReport
{
    std::size_t count = 0;
    std::size_t violations = 0;
    std::vector<SuiteViolation> first_violations;  // at most 10
    Quantiles root, ratio, pairwise;
    double sharpness_residual = 0.0;  // max over n = 2..16 for (1, 0, …, 0)
    double tolerance = 0.0;
};

inline AmgmSuiteReport amgm_suite(std::size_t count, int n, RngSeed seed, double tol = 1e-10)
{
    AmgmSuiteReport rep;
    rep.count = count;
    rep.tolerance = tol;
    std::vector<double> r1(count), r2(count), r3(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto x = suite_tuple(n, seed, i);
        const auto d = stable_amgm(x);
        const double hi = *std::max_element(x.begin(), x.end());
        const double s = hi > 0.0 ? 1.0 / hi : 0.0;
        r1[i] = d.root_residual * s;
        r2[i] = d.ratio_residual * s;
        r3[i] = d.pairwise_residual * s;
        for (auto [name, v] : {std::pair{"root", r1[i]}, std::pair{"ratio", r2[i]}, std::pair{"pairwise", r3[i]}})
            if (v < -tol) {
                ++rep.violations;
                if (rep.first_violations.size() < 10) rep.first_violations.push_back({i, x, name, v});
            }
    }
    rep.root = quantiles(std::move(r1));
    rep.ratio = quantiles(std::move(r2));
    rep.pairwise = quantiles(std::move(r3));
    for (int k = 2; k <= 16; ++k) {
        std::vector<double> e(static_cast<std::size_t>(k), 0.0);
        e[0] = 1.0;
        const auto d = stable_amgm(e);
        rep.sharpness_residual = std::max({rep.sharpness_residual, std::abs(d.root_residual),
                                           std::abs(d.pairwise_residual)});
    }
    return rep;
}

/// Randomized check of Σ √(x_i/(1+x_i)) ≥ n √(x/(1+x)) on [0, 1/2]^n,
/// n drawn from 2..10 when 0 is passed.
struct LemmaSuiteReport
{
    std::size_t count = 0;
    std::size_t violations = 0;
    std::vector<SuiteViolation> first_violations;
    Quantiles slack;  // lhs − rhs
    double tolerance = 0.0;
};

inline LemmaSuiteReport lemma_suite(std::size_t count, int n, RngSeed seed, double tol = 1e-12)
{
    LemmaSuiteReport rep;
    rep.count = count;
    rep.tolerance = tol;
    std::vector<double> slack(count);
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng(seed.derive(i));
        const int len = n > 0 ? n : static_cast<int>(rng.integer(2, 10));
        std::vector<double> x(static_cast<std::size_t>(len));
        for (auto& v : x) v = rng.uniform(0.0, 0.5);
        const auto c = root_ratio_check(x);
        slack[i] = c.lhs - c.rhs;
        if (slack[i] < -tol) {
            ++rep.violations;
            if (rep.first_violations.size() < 10) rep.first_violations.push_back({i, x, "root-ratio", slack[i]});
        }
    }
    rep.slack = quantiles(std::move(slack));
    return rep;
}

/// A candidate pair of the worst-case search, rebuilt from (n, seed, index).
struct SearchCandidate
{
    ConvexBody K;
    ConvexBody L;
    std::string generator;
};

/// Body with every vertex moved uniformly within `radius`.
inline ConvexBody jitter(const ConvexBody& K, double radius, CounterRng& rng, std::string label)
{
    const int n = K.dimension();
    std::vector<Vector> pts;
    for (const auto& v : K.vertices()) {
        Vector d(n);
        for (int i = 0; i < n; ++i) d(i) = rng.normal();
        pts.push_back(v + radius * std::pow(rng.uniform(), 1.0 / n) * d.normalized());
    }
    return convex_hull(pts, std::move(label));
}

/// Generators cycle with the index: random pair, near-homothetic pair (vertex
/// jitter at 10^-3 … 10^-1 of the radius), member of the box family.
inline SearchCandidate search_candidate(int n, RngSeed seed, std::size_t index)
{
    const RngSeed s = seed.derive(index);
    CounterRng rng(s.derive(1000));
    const std::string tag = "search(n=" + std::to_string(n) + ",seed=" + std::to_string(seed.seed) +
                            ",stream=" + std::to_string(seed.stream) + ",index=" + std::to_string(index) + ")";
    switch (index % 3) {
    case 0: {
        const int pk = static_cast<int>(rng.integer(n + 1, n + 6));
        const int pl = static_cast<int>(rng.integer(n + 1, n + 6));
        return {random_body(n, pk, rng.uniform() < 0.3, s.derive(1)).with_label(tag + ":K"),
                random_body(n, pl, rng.uniform() < 0.3, s.derive(2)).with_label(tag + ":L"), "random"};
    }
    case 1: {
        const int pk = static_cast<int>(rng.integer(n + 2, n + 6));
        const auto K = random_body(n, pk, rng.uniform() < 0.3, s.derive(1)).with_label(tag + ":K");
        const double R = enclosing_ball(K).radius;
        const double scale_jitter = std::pow(10.0, rng.uniform(-3.0, -1.0));
        const double t = std::pow(10.0, rng.uniform(-0.3, 0.3));
        Vector shift(n);
        for (int i = 0; i < n; ++i) shift(i) = rng.normal();
        auto L = jitter(K, scale_jitter * R, rng, tag + ":L");
        L = apply_affine(L, {t * Matrix::Identity(n, n), shift}).with_label(tag + ":L");
        return {K, L, "near-homothetic"};
    }
    default: {
        const double eps = std::pow(10.0, rng.uniform(-3.0, std::log10(0.3)));
        const int m = n / 2;
        Vector hi = Vector::Ones(n);
        for (int i = m; i < n; ++i) hi(i) = 1.0 + eps;
        return {cube(n).with_label(tag + ":K"), box(Vector::Zero(n), hi, tag + ":L"), "box-family"};
    }
    }
}

struct SearchEntry
{
    InequalityReport report;
    double empirical_constant = 0.0;  // A² / (β σ^{1/n}), a lower bound on the optimal constant
    std::size_t index = 0;
    std::string generator;
};

/// `budget` candidate pairs ranked by A²/(β σ^{1/n}); the top `keep` are
/// returned with what is needed to rebuild them (n, seed, index).
inline std::vector<SearchEntry> worst_case_search(int n, std::size_t budget, RngSeed seed, std::size_t keep = 10,
                                                  const OverlapSearchOptions& opt = {}, int threads = 0)
{
    if (n < 2 || n > 5) throw DegenerateInput("worst-case search supports 2 <= n <= 5");
    std::vector<SearchEntry> all(budget);
    parallel_for(budget, [&](std::size_t i) {
        const auto cand = search_candidate(n, seed, i);
        const auto m = measure_pair(cand.K, cand.L, true, opt);
        SearchEntry e;
        e.report = bm_report(m);
        e.report.seed = seed.derive(i);
        e.index = i;
        e.generator = cand.generator;
        const double denom = m.beta * std::pow(m.sigma, 1.0 / n);
        e.empirical_constant = denom > 0.0 ? m.asymmetry * m.asymmetry / denom : 0.0;
        all[i] = std::move(e);
    }, threads);
    std::stable_sort(all.begin(), all.end(), [](const SearchEntry& a, const SearchEntry& b) {
        if (a.empirical_constant != b.empirical_constant) return a.empirical_constant > b.empirical_constant;
        return a.index < b.index;
    });
    if (all.size() > keep) all.resize(keep);
    return all;
}

} // namespace wulff
