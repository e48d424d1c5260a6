#pragma once

// Volume of K ∩ (x + t L) as a function of the translation x.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <limits>
#include <unordered_map>
#include <vector>

#include "wulff/body.hpp"

namespace wulff {

struct OverlapOptions
{
    int exact_dimension_cap = 4;       // Monte-Carlo above this dimension
    std::size_t mc_samples = 200000;
    RngSeed seed{0x0be1a9, 0};
    std::size_t lattice_cache = 8;     // face lattices kept for reuse between nearby shifts
};

namespace detail {

/// Counter-clockwise vertex loop of a convex polygon.
inline std::vector<Eigen::Vector2d> ccw_polygon(const ConvexBody& K)
{
    const Vector m = K.vertex_mean();
    std::vector<Eigen::Vector2d> pts;
    for (const auto& v : K.vertices()) pts.emplace_back(v(0), v(1));
    std::sort(pts.begin(), pts.end(), [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return std::atan2(a.y() - m(1), a.x() - m(0)) < std::atan2(b.y() - m(1), b.x() - m(0));
    });
    return pts;
}

inline double shoelace(const std::vector<Eigen::Vector2d>& p)
{
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& u = p[i];
        const auto& v = p[(i + 1) % p.size()];
        a += u.x() * v.y() - u.y() * v.x();
    }
    return 0.5 * a;
}

/// Sutherland-Hodgman: clip a convex polygon by the halfplane n.x <= c.
inline void clip_halfplane(std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& nrm, double c,
                           std::vector<Eigen::Vector2d>& scratch)
{
    scratch.clear();
    const std::size_t k = poly.size();
    for (std::size_t i = 0; i < k; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % k];
        const double da = nrm.dot(a) - c;
        const double db = nrm.dot(b) - c;
        if (da <= 0.0) scratch.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) scratch.push_back(a + (da / (da - db)) * (b - a));
    }
    poly.swap(scratch);
}


/// Determinant of a small row-major k x k matrix by partial-pivot elimination (destroys `a`).
inline double small_det(double* a, int k)
{
    if (k == 3)
        return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
               a[2] * (a[3] * a[7] - a[4] * a[6]);
    if (k == 4) {
        const double s0 = a[0] * a[5] - a[1] * a[4], s1 = a[0] * a[6] - a[2] * a[4];
        const double s2 = a[0] * a[7] - a[3] * a[4], s3 = a[1] * a[6] - a[2] * a[5];
        const double s4 = a[1] * a[7] - a[3] * a[5], s5 = a[2] * a[7] - a[3] * a[6];
        const double c5 = a[10] * a[15] - a[11] * a[14], c4 = a[9] * a[15] - a[11] * a[13];
        const double c3 = a[9] * a[14] - a[10] * a[13], c2 = a[8] * a[15] - a[11] * a[12];
        const double c1 = a[8] * a[14] - a[10] * a[12], c0 = a[8] * a[13] - a[9] * a[12];
        return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
    }
    double det = 1.0;
    for (int c = 0; c < k; ++c) {
        int piv = c;
        for (int r = c + 1; r < k; ++r)
            if (std::abs(a[r * k + c]) > std::abs(a[piv * k + c])) piv = r;
        if (a[piv * k + c] == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
            det = -det;
        }
        det *= a[c * k + c];
        for (int r = c + 1; r < k; ++r) {
            const double f = a[r * k + c] / a[c * k + c];
            for (int j = c; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
        }
    }
    return det;
}

/// Face lattice of a polytope {y : N y <= b}, kept so the volume can be
/// re-evaluated cheaply after the offsets move, as long as the combinatorial
/// type has not changed.
struct PolarStructure
{
    int n = 0;
    std::vector<int> basis;          // n well-conditioned tight constraints per vertex
    std::vector<int> tight;          // constraints tight at vertex v: [tight_at[v], tight_at[v+1])
    std::vector<int> tight_at;
    std::vector<int> face_vertices;  // vertices of face f: [face_at[f], face_at[f+1])
    std::vector<int> face_at;
    std::vector<int> flags;          // per flag: n-1 face ids from the facet down, then a vertex
    bool empty() const { return flags.empty(); }
};

/// Solves the k x k row-major system a x = r in place (partial pivoting).
/// Returns false when a pivot falls below `rel` times the largest entry.
inline bool small_solve(double* a, double* r, int k, double rel)
{
    double big = 0.0;
    for (int i = 0; i < k * k; ++i) big = std::max(big, std::abs(a[i]));
    for (int c = 0; c < k; ++c) {
        int piv = c;
        for (int i = c + 1; i < k; ++i)
            if (std::abs(a[i * k + c]) > std::abs(a[piv * k + c])) piv = i;
        if (!(std::abs(a[piv * k + c]) > rel * big)) return false;
        if (piv != c) {
            for (int j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
            std::swap(r[c], r[piv]);
        }
        for (int i = c + 1; i < k; ++i) {
            const double f = a[i * k + c] / a[c * k + c];
            for (int j = c; j < k; ++j) a[i * k + j] -= f * a[c * k + j];
            r[i] -= f * r[c];
        }
    }
    for (int c = k - 1; c >= 0; --c) {
        double s = r[c];
        for (int j = c + 1; j < k; ++j) s -= a[c * k + j] * r[j];
        r[c] = s / a[c * k + c];
    }
    return true;
}

/// Vertex positions for the bases of S, n per vertex. Returns false if a basis
/// has become singular, a vertex violates a constraint by more than `tol`, or
/// a constraint recorded as tight has come loose.
///
/// All vertices feasible means every edge of S joins two feasible points on a
/// common line, so S is closed under the true adjacency and still describes
/// the polytope.
inline bool structure_vertices(const PolarStructure& S, const Matrix& Nt, const Vector& b, double tol,
                               std::vector<double>& verts)
{
    const int n = S.n;
    const auto m = Nt.cols();
    const std::size_t V = S.basis.size() / static_cast<std::size_t>(n);
    verts.resize(V * static_cast<std::size_t>(n));
    std::array<double, 36> a{};
    for (std::size_t f = 0; f < V; ++f) {
        const int* B = S.basis.data() + f * static_cast<std::size_t>(n);
        double* v = verts.data() + f * static_cast<std::size_t>(n);
        for (int r = 0; r < n; ++r) {
            const double* row = Nt.col(B[r]).data();
            for (int c = 0; c < n; ++c) a[static_cast<std::size_t>(r * n + c)] = row[c];
            v[r] = b(B[r]);
        }
        if (!small_solve(a.data(), v, n, 1e-10)) return false;
        auto slack = [&](Eigen::Index i) {
            const double* row = Nt.col(i).data();
            double dot = 0.0;
            for (int k = 0; k < n; ++k) dot += row[k] * v[k];
            return b(i) - dot;
        };
        for (Eigen::Index i = 0; i < m; ++i)
            if (!(slack(i) >= -tol)) return false;
        for (int t = S.tight_at[f]; t < S.tight_at[f + 1]; ++t)
            if (!(slack(S.tight[static_cast<std::size_t>(t)]) <= tol)) return false;
    }
    return true;
}

/// Volume summed over the barycentric flag subdivision: one simplex
/// (z, c(G_{n-1}), ..., c(G_1), v) per complete flag, with c the vertex
/// centroid of each face.
inline double flag_volume(const PolarStructure& S, const std::vector<double>& verts, const Vector& z)
{
    const int n = S.n;
    const std::size_t F = S.face_at.size() - 1;
    std::vector<double> cent(F * static_cast<std::size_t>(n), 0.0);
    for (std::size_t f = 0; f < F; ++f) {
        double* c = cent.data() + f * static_cast<std::size_t>(n);
        for (int t = S.face_at[f]; t < S.face_at[f + 1]; ++t) {
            const double* v = verts.data() + static_cast<std::ptrdiff_t>(S.face_vertices[static_cast<std::size_t>(t)]) * n;
            for (int i = 0; i < n; ++i) c[i] += v[i];
        }
        const double k = S.face_at[f + 1] - S.face_at[f];
        for (int i = 0; i < n; ++i) c[i] = c[i] / k - z(i);
    }
    double vol = 0.0;
    std::array<double, 36> a{};
    for (std::size_t g = 0; g < S.flags.size(); g += static_cast<std::size_t>(n)) {
        for (int k = 0; k + 1 < n; ++k) {
            const double* c = cent.data() + static_cast<std::ptrdiff_t>(S.flags[g + static_cast<std::size_t>(k)]) * n;
            std::copy(c, c + n, a.data() + k * n);
        }
        const double* v = verts.data() + static_cast<std::ptrdiff_t>(S.flags[g + static_cast<std::size_t>(n - 1)]) * n;
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>((n - 1) * n + i)] = v[i] - z(i);
        vol += std::abs(small_det(a.data(), n));
    }
    return vol / factorial(n);
}

/// Face lattice of {y : Nt^T y <= b} around the interior point z.
///
/// Vertices come from the hull of the polar points N_i / (b_i - N_i.z),
/// jittered into general position. Each hull facet proposes a vertex: the
/// polar points on its plane are the tight constraints, and a pivoted basis of
/// them fixes the vertex on the exact data. Flat facets (tight normals of rank
/// below n) are artefacts of the jitter and are skipped. Faces are then the
/// constraint incidence sets of the right affine dimension, so the result does
/// not depend on the jitter. Returns false if any stage fails.
inline bool polar_structure(const Matrix& Nt, const Vector& b, const Vector& z, double tol, std::size_t attempt,
                            PolarStructure& out)
{
    const int n = static_cast<int>(Nt.rows());
    const auto m = Nt.cols();
    Matrix D(n, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double s = b(i) - Nt.col(i).dot(z);
        if (!(s > 0.0)) return false;
        D.col(i) = Nt.col(i) / s;
    }
    D /= D.colwise().norm().maxCoeff();
    const std::vector<int> keep = dedupe(D, 1e-12);
    if (static_cast<int>(keep.size()) < n + 1) return false;
    static constexpr double jitters[] = {1e-11, 1e-9, 1e-7};
    Matrix J(n, static_cast<Eigen::Index>(keep.size()));
    CounterRng rng(RngSeed{0x901a7ULL, attempt});
    for (std::size_t j = 0; j < keep.size(); ++j)
        for (int i = 0; i < n; ++i)
            J(i, static_cast<Eigen::Index>(j)) = D(i, keep[j]) + jitters[attempt] * (2.0 * rng.uniform() - 1.0);
    std::vector<std::vector<int>> simplices;
    std::vector<double> planes;
    try {
        QuickHull qh(J, 1e-14 * n);
        simplices = qh.run(&planes);
    } catch (const HullInconsistency&) {
        return false;
    } catch (const DegenerateInput&) {
        return false;
    }

    out = PolarStructure{};
    out.n = n;
    out.tight_at.push_back(0);
    const double near = 1e-9 + 100.0 * jitters[attempt];
    std::vector<double> res;
    std::vector<char> used;
    std::vector<double> v(static_cast<std::size_t>(n));
    std::vector<int> T;
    std::vector<int> basis(static_cast<std::size_t>(n));
    std::vector<double> pos;  // vertex positions, n per vertex
    std::map<std::vector<int>, int> vertex_of;
    std::array<double, 36> a{};
    for (std::size_t f = 0; f < simplices.size(); ++f) {
        const double* nu = planes.data() + f * static_cast<std::size_t>(n + 1);
        const double o = nu[n];
        T.clear();
        for (Eigen::Index j = 0; j < m; ++j) {
            const double* dj = D.col(j).data();
            double d = -o;
            for (int i = 0; i < n; ++i) d += nu[i] * dj[i];
            if (std::abs(d) <= near) T.push_back(static_cast<int>(j));
        }
        // Pivoted Gram-Schmidt over the tight normals.
        res.assign(T.size() * static_cast<std::size_t>(n), 0.0);
        for (std::size_t t = 0; t < T.size(); ++t)
            for (int i = 0; i < n; ++i) res[t * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = Nt(i, T[t]);
        used.assign(T.size(), 0);
        bool full = true;
        for (int step = 0; step < n && full; ++step) {
            std::size_t best = T.size();
            double best_norm = 0.0;
            for (std::size_t t = 0; t < T.size(); ++t) {
                if (used[t]) continue;
                const double* r = res.data() + t * static_cast<std::size_t>(n);
                double s2 = 0.0;
                for (int i = 0; i < n; ++i) s2 += r[i] * r[i];
                if (s2 > best_norm) {
                    best_norm = s2;
                    best = t;
                }
            }
            if (best == T.size() || best_norm < 1e-16) {
                full = false;
                break;
            }
            used[best] = 1;
            basis[static_cast<std::size_t>(step)] = T[best];
            const double inv = 1.0 / std::sqrt(best_norm);
            const double* q = res.data() + best * static_cast<std::size_t>(n);
            for (std::size_t t = 0; t < T.size(); ++t) {
                if (used[t]) continue;
                double* r = res.data() + t * static_cast<std::size_t>(n);
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += r[i] * q[i];
                dot *= inv * inv;
                for (int i = 0; i < n; ++i) r[i] -= dot * q[i];
            }
        }
        if (!full) continue;

        for (int r = 0; r < n; ++r) {
            const int k = basis[static_cast<std::size_t>(r)];
            for (int c = 0; c < n; ++c) a[static_cast<std::size_t>(r * n + c)] = Nt(c, k);
            v[static_cast<std::size_t>(r)] = b(k);
        }
        if (!small_solve(a.data(), v.data(), n, 1e-10)) return false;
        // The tight set on the exact data identifies the vertex.
        T.clear();
        for (Eigen::Index j = 0; j < m; ++j) {
            double s = b(j);
            for (int i = 0; i < n; ++i) s -= Nt(i, j) * v[static_cast<std::size_t>(i)];
            if (s < -tol) return false;
            if (s <= tol) T.push_back(static_cast<int>(j));
        }
        auto [it, fresh] = vertex_of.try_emplace(T, static_cast<int>(vertex_of.size()));
        if (!fresh) continue;
        out.basis.insert(out.basis.end(), basis.begin(), basis.end());
        out.tight.insert(out.tight.end(), T.begin(), T.end());
        out.tight_at.push_back(static_cast<int>(out.tight.size()));
        pos.insert(pos.end(), v.begin(), v.end());
    }
    const int V = static_cast<int>(vertex_of.size());
    if (V < n + 1) return false;

    std::vector<std::vector<int>> incident(static_cast<std::size_t>(m));
    for (int v = 0; v < V; ++v)
        for (int t = out.tight_at[static_cast<std::size_t>(v)]; t < out.tight_at[static_cast<std::size_t>(v) + 1]; ++t)
            incident[static_cast<std::size_t>(out.tight[static_cast<std::size_t>(t)])].push_back(v);

    // Facets of a face G are the maximal proper intersections of G with the
    // incidence sets; for G = P the candidates are the incidence sets themselves.
    auto maximal = [](std::vector<std::vector<int>>& cand) {
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::vector<std::vector<int>> keep_sets;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            bool inside = false;
            for (std::size_t j = 0; j < cand.size() && !inside; ++j)
                inside = j != i && cand[j].size() > cand[i].size() &&
                         std::includes(cand[j].begin(), cand[j].end(), cand[i].begin(), cand[i].end());
            if (!inside) keep_sets.push_back(cand[i]);
        }
        cand.swap(keep_sets);
    };

    // faces[k]: vertex sets of the k-dimensional faces; children by index one level down.
    std::vector<std::vector<std::vector<int>>> faces(static_cast<std::size_t>(n));
    std::vector<std::vector<std::vector<int>>> children(static_cast<std::size_t>(n));
    {
        std::vector<std::vector<int>> cand;
        for (const auto& S : incident)
            if (static_cast<int>(S.size()) >= n) cand.push_back(S);
        maximal(cand);
        faces[static_cast<std::size_t>(n - 1)] = std::move(cand);
    }
    if (static_cast<int>(faces[static_cast<std::size_t>(n - 1)].size()) < n + 1) return false;
    std::map<std::vector<int>, int> seen;
    std::vector<std::vector<int>> cand;
    std::vector<int> S;
    std::vector<int> js;
    for (int k = n - 1; k >= 2; --k) {
        auto& level = faces[static_cast<std::size_t>(k)];
        auto& below = faces[static_cast<std::size_t>(k - 1)];
        auto& kids = children[static_cast<std::size_t>(k)];
        kids.assign(level.size(), {});
        seen.clear();
        for (std::size_t g = 0; g < level.size(); ++g) {
            const auto& G = level[g];
            js.clear();
            for (int v : G)
                for (int t = out.tight_at[static_cast<std::size_t>(v)]; t < out.tight_at[static_cast<std::size_t>(v) + 1]; ++t)
                    js.push_back(out.tight[static_cast<std::size_t>(t)]);
            std::sort(js.begin(), js.end());
            js.erase(std::unique(js.begin(), js.end()), js.end());
            cand.clear();
            for (int j : js) {
                const auto& Vj = incident[static_cast<std::size_t>(j)];
                S.clear();
                std::set_intersection(G.begin(), G.end(), Vj.begin(), Vj.end(), std::back_inserter(S));
                if (static_cast<int>(S.size()) >= k && S.size() < G.size()) cand.push_back(S);
            }
            maximal(cand);
            if (static_cast<int>(cand.size()) < k + 1) return false;
            for (auto& C : cand) {
                if (k == 2 && C.size() != 2) return false;
                auto [it, fresh] = seen.try_emplace(C, static_cast<int>(below.size()));
                if (fresh) below.push_back(C);
                kids[g].push_back(it->second);
            }
        }
    }

    // Flatten: face ids are assigned level by level from the facets down.
    std::vector<int> offset(static_cast<std::size_t>(n), 0);
    out.face_at.push_back(0);
    for (int k = n - 1, id = 0; k >= 1; --k) {
        offset[static_cast<std::size_t>(k)] = id;
        for (const auto& G : faces[static_cast<std::size_t>(k)]) {
            out.face_vertices.insert(out.face_vertices.end(), G.begin(), G.end());
            out.face_at.push_back(static_cast<int>(out.face_vertices.size()));
            ++id;
        }
    }
    std::vector<int> chain(static_cast<std::size_t>(n));
    std::function<void(int, int)> walk = [&](int k, int g) {
        chain[static_cast<std::size_t>(n - 1 - k)] = offset[static_cast<std::size_t>(k)] + g;
        if (k == 1) {
            for (int v : faces[1][static_cast<std::size_t>(g)]) {
                chain[static_cast<std::size_t>(n - 1)] = v;
                out.flags.insert(out.flags.end(), chain.begin(), chain.end());
            }
            return;
        }
        for (int c : children[static_cast<std::size_t>(k)][static_cast<std::size_t>(g)]) walk(k - 1, c);
    };
    for (std::size_t g = 0; g < faces[static_cast<std::size_t>(n - 1)].size(); ++g) walk(n - 1, static_cast<int>(g));
    return !out.flags.empty();
}

/// Recently seen face lattices, most recent first.
struct PolarCache
{
    std::size_t capacity = 8;
    std::vector<PolarStructure> recent;
    std::size_t hits = 0;
    std::size_t builds = 0;
};

/// Volume of {y : N y <= b} given a strictly interior point z. The lattices in
/// `cache`, when given, are tried first; a rebuilt lattice is added to it.
/// Throws HullInconsistency if no jitter level gives a valid structure.
inline double polar_volume(const Matrix& N, const Vector& b, const Vector& z, double tol,
                           PolarCache* cache = nullptr)
{
    const int n = static_cast<int>(N.cols());
    if (n > 6) throw HullInconsistency{};
    const Matrix Nt = N.transpose();
    std::vector<double> verts;
    if (cache) {
        for (std::size_t i = 0; i < cache->recent.size(); ++i) {
            const auto& S = cache->recent[i];
            if (S.n != n || !structure_vertices(S, Nt, b, tol, verts)) continue;
            const double v = flag_volume(S, verts, z);
            std::rotate(cache->recent.begin(), cache->recent.begin() + static_cast<std::ptrdiff_t>(i),
                        cache->recent.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            ++cache->hits;
            return v;
        }
    }
    PolarStructure S;
    for (std::size_t attempt = 0; attempt < 3; ++attempt) {
        if (!polar_structure(Nt, b, z, tol, attempt, S)) continue;
        if (!structure_vertices(S, Nt, b, tol, verts)) continue;
        const double v = flag_volume(S, verts, z);
        if (cache && cache->capacity > 0) {
            ++cache->builds;
            if (cache->recent.size() == cache->capacity) cache->recent.pop_back();
            cache->recent.insert(cache->recent.begin(), std::move(S));
        }
        return v;
    }
    throw HullInconsistency{};
}

} // namespace detail

/// Prepared evaluator for x -> |K ∩ (x + t L)| with a fixed pair and scale t.
/// Remembers the last combinatorial type it saw, so one instance must not be
/// called from several threads at once.
class OverlapVolume
{
public:
    OverlapVolume(const ConvexBody& K, const ConvexBody& L, double scale, const OverlapOptions& opt = {})
        : K_(K), L_(L), t_(scale), n_(K.dimension()), opt_(opt)
    {
        if (K.dimension() != L.dimension()) throw DimensionMismatch("overlap of bodies of different dimension");
        if (!(scale > 0.0)) throw DegenerateInput("overlap scale must be positive");
        span_ = 2.0 * (enclosing_ball(K).radius + scale * enclosing_ball(L).radius);
        warm_.capacity = opt.lattice_cache;
        if (n_ == 2) {
            k_poly_ = detail::ccw_polygon(K);
            for (const auto& h : K.facets()) k_half_.push_back({h.normal, h.offset});
            for (const auto& v : detail::ccw_polygon(L)) l_poly_.push_back(scale * v);
        } else if (n_ <= opt.exact_dimension_cap) {
            for (const auto& h : K.facets()) A_rows_.push_back({h.normal, h.offset});
            for (const auto& h : L.facets()) B_rows_.push_back({h.normal, scale * h.offset});
        } else {
            // Common random numbers: one fixed sample of K reused at every x.
            const Ball B = enclosing_ball(K);
            CounterRng rng(opt.seed);
            std::size_t tries = 0;
            while (samples_.size() < opt.mc_samples) {
                Vector p = sample_in_ball(B, rng);
                ++tries;
                if (body_contains(K, p)) samples_.push_back(std::move(p));
                if (tries > 1000 * opt.mc_samples) throw DegenerateInput("rejection sampler for K stalled");
            }
            vol_K_ = unit_ball_volume(n_) * std::pow(B.radius, n_) * static_cast<double>(samples_.size()) /
                     static_cast<double>(tries);
            // Exact |K| when available keeps the estimate on the right scale.
            if (n_ <= kDefaultFacetDimensionCap) vol_K_ = volume(K);
            if (n_ <= kDefaultFacetDimensionCap)
                for (const auto& h : L.facets()) B_rows_.push_back({h.normal, scale * h.offset});
        }
    }

    double operator()(const Vector& x) const
    {
        if (n_ == 2) return planar(x);
        if (n_ <= opt_.exact_dimension_cap) return stacked(x);
        return sampled(x);
    }

    double scale() const { return t_; }
    std::size_t lattice_hits() const { return warm_.hits; }
    std::size_t lattice_builds() const { return warm_.builds; }
    bool exact() const { return n_ <= opt_.exact_dimension_cap; }

private:
    double planar(const Vector& x) const
    {
        std::vector<Eigen::Vector2d> poly;
        poly.reserve(l_poly_.size() + k_half_.size());
        const Eigen::Vector2d shift(x(0), x(1));
        for (const auto& v : l_poly_) poly.push_back(v + shift);
        std::vector<Eigen::Vector2d> scratch;
        for (const auto& h : k_half_) {
            detail::clip_halfplane(poly, Eigen::Vector2d(h.normal(0), h.normal(1)), h.offset, scratch);
            if (poly.size() < 3) return 0.0;
        }
        return std::max(0.0, detail::shoelace(poly));
    }

    // Vertices of the stacked H-representation by polarity about an interior
    // point, then the exact hull volume.
    double stacked(const Vector& x) const
    {
        const auto m = static_cast<Eigen::Index>(A_rows_.size() + B_rows_.size());
        Matrix N(m, n_);
        Vector b(m);
        Eigen::Index r = 0;
        for (const auto& h : A_rows_) {
            N.row(r) = h.normal.transpose();
            b(r++) = h.offset;
        }
        for (const auto& h : B_rows_) {
            N.row(r) = h.normal.transpose();
            b(r++) = h.offset + h.normal.dot(x);
        }
        const auto cc = chebyshev_center(N, b, x + t_ * L_.centroid());
        if (cc.radius <= 1e-10 * span_) return 0.0;
        try {
            return detail::polar_volume(N, b, cc.center, 1e-8 * span_, &warm_);
        } catch (const detail::HullInconsistency&) {
            return hulled(N, b, cc.center);
        }
    }

    // Slow path: vertices from the polar hull on original coordinates, then a
    // second hull for the volume. Tolerates missing near-duplicate vertices.
    double hulled(const Matrix& N, const Vector& b, const Vector& z) const
    {
        const auto m = N.rows();
        std::vector<Vector> dual;
        dual.reserve(static_cast<std::size_t>(m));
        for (Eigen::Index i = 0; i < m; ++i) {
            const double s = b(i) - N.row(i).dot(z);
            dual.push_back(N.row(i).transpose() / s);
        }
        BoundaryTriangulation dt;
        try {
            dt = boundary_triangulation(dual);
        } catch (const DegenerateInput&) {
            return 0.0;
        }
        const double tol = 1e-9 * span_;
        std::vector<Vector> verts;
        verts.reserve(dt.facets.size());
        for (const auto& f : dt.facets) {
            if (f.shape < detail::kSliverShape || !(f.offset > 0.0)) continue;
            Vector v = z + f.normal / f.offset;
            bool inside = true;
            for (Eigen::Index i = 0; i < m && inside; ++i) inside = N.row(i).dot(v) <= b(i) + tol;
            if (inside) verts.push_back(std::move(v));
        }
        if (static_cast<int>(verts.size()) < n_ + 1) return 0.0;
        try {
            return boundary_triangulation(verts).volume;
        } catch (const DegenerateInput&) {
            return 0.0;
        }
    }

    double sampled(const Vector& x) const
    {
        std::size_t hits = 0;
        const double tol = 1e-12 * span_;
        for (const auto& p : samples_) {
            const Vector y = p - x;
            bool in = true;
            if (!B_rows_.empty()) {
                for (const auto& h : B_rows_)
                    if (h.normal.dot(y) > h.offset + tol) {
                        in = false;
                        break;
                    }
            } else {
                in = body_contains(L_, y / t_);
            }
            hits += in;
        }
        return vol_K_ * static_cast<double>(hits) / static_cast<double>(samples_.size());
    }

    ConvexBody K_;
    ConvexBody L_;
    double t_;
    int n_;
    OverlapOptions opt_;
    double span_ = 1.0;
    std::vector<Eigen::Vector2d> k_poly_;
    std::vector<Halfspace> k_half_;
    std::vector<Eigen::Vector2d> l_poly_;
    std::vector<Halfspace> A_rows_;
    std::vector<Halfspace> B_rows_;
    std::vector<Vector> samples_;
    double vol_K_ = 0.0;
    mutable detail::PolarCache warm_;
};

} // namespace wulff
