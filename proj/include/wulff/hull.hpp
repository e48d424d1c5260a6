#pragma once

// Simplicial boundary of the convex hull of a point set in any dimension.
//
// Combinatorics come from Quickhull on a slightly jittered copy of the input,
// which removes the coplanar and cospherical ties of boxes, zonotopes and
// Minkowski sums. All geometry (normals, areas, volumes) is evaluated on the
// original coordinates, and every well-shaped facet is checked to support the
// whole point set. A failed check retries with a larger jitter.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "wulff/error.hpp"
#include "wulff/rng.hpp"

namespace wulff {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One oriented (d-1)-simplex of the hull boundary.
struct BoundaryFacet
{
    std::vector<int> vertices;  // indices into the input point list
    Vector normal;              // outward unit normal, original coordinates
    double offset = 0.0;        // normal . x = offset on the facet plane
    double area = 0.0;          // (d-1)-dimensional measure
    double shape = 0.0;         // smallest height / longest edge, in [0, 1]
};

struct BoundaryTriangulation
{
    int dimension = 0;
    std::vector<BoundaryFacet> facets;
    std::vector<int> vertices;  // sorted indices of points used by some facet
    Vector interior;            // a point strictly inside the hull
    double volume = 0.0;        // signed-cone volume of the oriented boundary
    double jitter = 0.0;        // relative jitter that produced the combinatorics
};

namespace detail {

/// Facets flatter than this are skipped when validating and when extracting
/// supporting hyperplanes; their normals are not numerically meaningful.
inline constexpr double kSliverShape = 1e-6;

/// Largest dimension the hull kernel accepts.
inline constexpr int kMaxHullDimension = 12;

/// Unit normal of the hyperplane through d points of R^d (`cols[i]` points to
/// d coordinates), by two-pass modified Gram-Schmidt on the edges from the
/// first point. `gram_root` is the (d-1)-volume of the edge parallelotope and
/// `shape` that volume over the product of edge lengths. `work` holds d*d doubles.
inline void plane_through(const double* const* cols, int d, double* normal, double& shape, double& gram_root,
                          double* work)
{
    double edge_prod = 1.0;
    double g = 1.0;
    for (int k = 1; k < d; ++k) {
        double* e = work + (k - 1) * d;
        double n0 = 0.0;
        for (int i = 0; i < d; ++i) {
            e[i] = cols[k][i] - cols[0][i];
            n0 += e[i] * e[i];
        }
        edge_prod *= std::sqrt(n0);
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < k - 1; ++j) {
                const double* q = work + j * d;
                double dot = 0.0;
                for (int i = 0; i < d; ++i) dot += q[i] * e[i];
                for (int i = 0; i < d; ++i) e[i] -= dot * q[i];
            }
        }
        double nrm = 0.0;
        for (int i = 0; i < d; ++i) nrm += e[i] * e[i];
        nrm = std::sqrt(nrm);
        g *= nrm;
        if (nrm > 0.0)
            for (int i = 0; i < d; ++i) e[i] /= nrm;
    }
    int axis = 0;
    double best = -1.0;
    for (int a = 0; a < d; ++a) {
        double r = 1.0;
        for (int j = 0; j < d - 1; ++j) r -= work[j * d + a] * work[j * d + a];
        if (r > best) {
            best = r;
            axis = a;
        }
    }
    for (int i = 0; i < d; ++i) normal[i] = i == axis ? 1.0 : 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < d - 1; ++j) {
            const double* q = work + j * d;
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += q[i] * normal[i];
            for (int i = 0; i < d; ++i) normal[i] -= dot * q[i];
        }
    }
    double nn = 0.0;
    for (int i = 0; i < d; ++i) nn += normal[i] * normal[i];
    nn = std::sqrt(nn);
    for (int i = 0; i < d; ++i) normal[i] /= nn;
    gram_root = g;
    shape = edge_prod > 0.0 ? g / edge_prod : 0.0;
}

/// Thickness of the (d-1)-simplex on `cols`: smallest vertex-to-opposite-face
/// distance over the longest edge. Small values mean the facet plane is
/// ill-determined by its vertices, whatever the cause (flat or short-edged).
inline double simplex_thickness(const double* const* cols, int d, double* work, double* height_out = nullptr)
{
    auto gram = [&](const double* base, const double* const* others, int k) {
        double g = 1.0;
        for (int e = 0; e < k; ++e) {
            double* v = work + e * d;
            for (int i = 0; i < d; ++i) v[i] = others[e][i] - base[i];
            for (int pass = 0; pass < 2; ++pass)
                for (int j = 0; j < e; ++j) {
                    const double* q = work + j * d;
                    double dot = 0.0;
                    for (int i = 0; i < d; ++i) dot += q[i] * v[i];
                    for (int i = 0; i < d; ++i) v[i] -= dot * q[i];
                }
            double nrm = 0.0;
            for (int i = 0; i < d; ++i) nrm += v[i] * v[i];
            nrm = std::sqrt(nrm);
            g *= nrm;
            if (nrm > 0.0)
                for (int i = 0; i < d; ++i) v[i] /= nrm;
        }
        return g;
    };
    std::array<const double*, kMaxHullDimension> rest{};
    double longest = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            double s = 0.0;
            for (int i = 0; i < d; ++i) s += (cols[a][i] - cols[b][i]) * (cols[a][i] - cols[b][i]);
            longest = std::max(longest, s);
        }
    longest = std::sqrt(longest);
    if (!(longest > 0.0)) return 0.0;
    for (int e = 1; e < d; ++e) rest[static_cast<std::size_t>(e - 1)] = cols[e];
    const double full = gram(cols[0], rest.data(), d - 1);
    double height = std::numeric_limits<double>::infinity();
    for (int skip = 0; skip < d; ++skip) {
        int k = 0;
        const double* base = skip == 0 ? cols[1] : cols[0];
        for (int e = 0; e < d; ++e)
            if (e != skip && cols[e] != base) rest[static_cast<std::size_t>(k++)] = cols[e];
        const double face = gram(base, rest.data(), k);
        height = std::min(height, face > 0.0 ? full / face : 0.0);
    }
    if (height_out) *height_out = height;
    return height / longest;
}

/// Unit normal of the hyperplane through the columns of `pts` (d x d) and the
/// shape measure of the simplex they span.
inline void simplex_plane(const Matrix& pts, Vector& normal, double& shape, double& gram_root)
{
    const int d = static_cast<int>(pts.rows());
    std::vector<const double*> cols(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) cols[static_cast<std::size_t>(i)] = pts.col(i).data();
    std::vector<double> work(static_cast<std::size_t>(d * d));
    normal.resize(d);
    plane_through(cols.data(), d, normal.data(), shape, gram_root, work.data());
}

/// Raised inside Quickhull when floating-point predicates disagree.
struct HullInconsistency
{
};

inline double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

class QuickHull
{
public:
    QuickHull(const Matrix& pts, double eps)
        : P_(pts), d_(static_cast<int>(pts.rows())), eps_(eps), work_(static_cast<std::size_t>(d_ * d_)),
          cols_(static_cast<std::size_t>(d_))
    {
        if (d_ < 2 || d_ > kMaxHullDimension) throw MethodUnavailable("hull dimension out of range");
    }

    /// Returns oriented facets as index lists into the columns of `pts`.
    /// Facets as vertex index lists, positively oriented. With `planes`, also
    /// appends each facet's outward unit normal followed by its offset.
    std::vector<std::vector<int>> run(std::vector<double>* planes = nullptr)
    {
        initial_simplex();
        std::vector<int> stack;
        for (int f = 0; f < count(); ++f)
            if (!out_[static_cast<std::size_t>(f)].empty()) stack.push_back(f);
        int iter = 0;
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            if (!alive_[static_cast<std::size_t>(f)] || out_[static_cast<std::size_t>(f)].empty()) continue;
            ++iter;
            add_point(f, iter, stack);
        }
        check_closed();
        std::vector<std::vector<int>> out;
        Matrix M(d_, d_);
        for (int f = 0; f < count(); ++f) {
            if (!alive_[static_cast<std::size_t>(f)]) continue;
            std::vector<int> v(V(f), V(f) + d_);
            for (int i = 0; i < d_; ++i) M.col(i) = P_.col(v[static_cast<std::size_t>(i)]) - interior_;
            if (M.determinant() < 0.0) std::swap(v[0], v[1]);
            out.push_back(std::move(v));
            if (planes) {
                const double* nrm = fn_.data() + static_cast<std::ptrdiff_t>(f) * d_;
                planes->insert(planes->end(), nrm, nrm + d_);
                planes->push_back(off_[static_cast<std::size_t>(f)]);
            }
        }
        return out;
    }

    const Vector& interior() const { return interior_; }

private:
    int count() const { return static_cast<int>(off_.size()); }
    int* V(int f) { return fv_.data() + static_cast<std::ptrdiff_t>(f) * d_; }
    int* NB(int f) { return fnb_.data() + static_cast<std::ptrdiff_t>(f) * d_; }

    double dist(int f, int p) const
    {
        const double* n = fn_.data() + static_cast<std::ptrdiff_t>(f) * d_;
        const double* x = P_.data() + static_cast<std::ptrdiff_t>(p) * d_;
        double s = -off_[static_cast<std::size_t>(f)];
        for (int i = 0; i < d_; ++i) s += n[i] * x[i];
        return s;
    }

    /// Appends a facet on vertices `v` with all neighbours unset.
    int new_facet(const int* v)
    {
        const int id = count();
        fv_.insert(fv_.end(), v, v + d_);
        fnb_.insert(fnb_.end(), static_cast<std::size_t>(d_), -1);
        fn_.resize(fn_.size() + static_cast<std::size_t>(d_));
        off_.push_back(0.0);
        alive_.push_back(1);
        vis_.push_back(0);
        hid_.push_back(0);
        out_.emplace_back();
        for (int i = 0; i < d_; ++i) cols_[static_cast<std::size_t>(i)] = P_.col(v[i]).data();
        double* n = fn_.data() + static_cast<std::ptrdiff_t>(id) * d_;
        double shape = 0.0;
        double g = 0.0;
        plane_through(cols_.data(), d_, n, shape, g, work_.data());
        double o = 0.0;
        double side = 0.0;
        for (int i = 0; i < d_; ++i) {
            o += n[i] * cols_[0][i];
            side += n[i] * interior_(i);
        }
        if (side > o) {
            for (int i = 0; i < d_; ++i) n[i] = -n[i];
            o = -o;
        }
        off_[static_cast<std::size_t>(id)] = o;
        return id;
    }

    void initial_simplex()
    {
        const int N = static_cast<int>(P_.cols());
        std::vector<int> chosen;
        int i0 = 0;
        for (int i = 1; i < N; ++i)
            if (P_(0, i) < P_(0, i0)) i0 = i;
        chosen.push_back(i0);
        Matrix basis(d_, 0);
        for (int k = 0; k < d_; ++k) {
            int best = -1;
            double best_d = -1.0;
            for (int i = 0; i < N; ++i) {
                Vector r = P_.col(i) - P_.col(i0);
                if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
                const double dd = r.norm();
                if (dd > best_d) {
                    best_d = dd;
                    best = i;
                }
            }
            if (best_d <= 1e-13) throw DegenerateInput("point set is not full-dimensional");
            Vector r = P_.col(best) - P_.col(i0);
            for (int pass = 0; pass < 2; ++pass)
                if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
            basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
            basis.col(basis.cols() - 1) = r.normalized();
            chosen.push_back(best);
        }
        interior_ = Vector::Zero(d_);
        for (int c : chosen) interior_ += P_.col(c);
        interior_ /= static_cast<double>(d_ + 1);

        std::vector<int> ids;
        std::vector<int> v;
        for (int skip = 0; skip <= d_; ++skip) {
            v.clear();
            for (int i = 0; i <= d_; ++i)
                if (i != skip) v.push_back(chosen[static_cast<std::size_t>(i)]);
            ids.push_back(new_facet(v.data()));
        }
        link(ids);

        std::vector<char> in_simplex(static_cast<std::size_t>(N), 0);
        for (int c : chosen) in_simplex[static_cast<std::size_t>(c)] = 1;
        for (int p = 0; p < N; ++p) {
            if (in_simplex[static_cast<std::size_t>(p)]) continue;
            for (int f : ids) {
                if (dist(f, p) > eps_) {
                    out_[static_cast<std::size_t>(f)].push_back(p);
                    break;
                }
            }
        }
    }

    /// Connects facets in `ids` that share a ridge; a ridge seen more than
    /// twice means the predicates were inconsistent.
    void link(const std::vector<int>& ids)
    {
        struct Entry
        {
            std::array<int, kMaxHullDimension - 1> key;
            int facet;
            int slot;
        };
        std::vector<Entry> es;
        es.reserve(ids.size() * static_cast<std::size_t>(d_));
        for (int id : ids) {
            for (int k = 0; k < d_; ++k) {
                if (NB(id)[k] != -1) continue;
                Entry e{};
                e.key.fill(-1);
                int c = 0;
                for (int i = 0; i < d_; ++i)
                    if (i != k) e.key[static_cast<std::size_t>(c++)] = V(id)[i];
                std::sort(e.key.begin(), e.key.begin() + c);
                e.facet = id;
                e.slot = k;
                es.push_back(e);
            }
        }
        std::sort(es.begin(), es.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });
        for (std::size_t i = 0; i < es.size();) {
            std::size_t j = i + 1;
            while (j < es.size() && es[j].key == es[i].key) ++j;
            if (j - i > 2) throw HullInconsistency{};
            if (j - i == 2) {
                NB(es[i].facet)[es[i].slot] = es[i + 1].facet;
                NB(es[i + 1].facet)[es[i + 1].slot] = es[i].facet;
            }
            i = j;
        }
    }

    void add_point(int start, int iter, std::vector<int>& stack)
    {
        int apex = -1;
        double far = -1.0;
        for (int p : out_[static_cast<std::size_t>(start)]) {
            const double dp = dist(start, p);
            if (dp > far) {
                far = dp;
                apex = p;
            }
        }

        std::vector<int> visible{start};
        vis_[static_cast<std::size_t>(start)] = iter;
        for (std::size_t q = 0; q < visible.size(); ++q) {
            const int fid = visible[q];
            for (int k = 0; k < d_; ++k) {
                const int g = NB(fid)[k];
                if (g < 0) throw HullInconsistency{};
                if (vis_[static_cast<std::size_t>(g)] == iter || hid_[static_cast<std::size_t>(g)] == iter) continue;
                if (dist(g, apex) > eps_) {
                    vis_[static_cast<std::size_t>(g)] = iter;
                    visible.push_back(g);
                } else {
                    hid_[static_cast<std::size_t>(g)] = iter;
                }
            }
        }

        std::vector<int> created;
        std::vector<int> v(static_cast<std::size_t>(d_));
        for (int fid : visible) {
            for (int k = 0; k < d_; ++k) {
                const int g = NB(fid)[k];
                if (vis_[static_cast<std::size_t>(g)] == iter) continue;
                std::copy(V(fid), V(fid) + d_, v.begin());
                v[static_cast<std::size_t>(k)] = apex;
                const int nid = new_facet(v.data());
                NB(nid)[k] = g;
                for (int j = 0; j < d_; ++j)
                    if (NB(g)[j] == fid) NB(g)[j] = nid;
                created.push_back(nid);
            }
        }
        link(created);
        for (int nid : created)
            for (int k = 0; k < d_; ++k)
                if (NB(nid)[k] < 0) throw HullInconsistency{};

        for (int fid : visible) {
            alive_[static_cast<std::size_t>(fid)] = 0;
            auto pts = std::move(out_[static_cast<std::size_t>(fid)]);
            out_[static_cast<std::size_t>(fid)] = {};
            for (int p : pts) {
                if (p == apex) continue;
                for (int nid : created) {
                    if (dist(nid, p) > eps_) {
                        out_[static_cast<std::size_t>(nid)].push_back(p);
                        break;
                    }
                }
            }
        }
        for (int nid : created)
            if (!out_[static_cast<std::size_t>(nid)].empty()) stack.push_back(nid);
    }

    /// Every live facet must be glued to live neighbours along full ridges.
    void check_closed()
    {
        for (int f = 0; f < count(); ++f) {
            if (!alive_[static_cast<std::size_t>(f)]) continue;
            for (int k = 0; k < d_; ++k) {
                const int g = NB(f)[k];
                if (g < 0 || !alive_[static_cast<std::size_t>(g)]) throw HullInconsistency{};
                int back = 0;
                for (int j = 0; j < d_; ++j) back += NB(g)[j] == f;
                if (back != 1) throw HullInconsistency{};
                int shared = 0;
                for (int i = 0; i < d_; ++i) {
                    if (i == k) continue;
                    for (int j = 0; j < d_; ++j) shared += V(f)[i] == V(g)[j];
                }
                if (shared != d_ - 1) throw HullInconsistency{};
            }
        }
    }

    const Matrix& P_;
    int d_;
    double eps_;
    Vector interior_;
    std::vector<int> fv_;
    std::vector<int> fnb_;
    std::vector<double> fn_;
    std::vector<double> off_;
    std::vector<char> alive_;
    std::vector<int> vis_;
    std::vector<int> hid_;
    std::vector<std::vector<int>> out_;
    std::vector<double> work_;
    std::vector<const double*> cols_;
};

/// Removes points closer than `tol` (max-norm) to an earlier kept point.
inline std::vector<int> dedupe(const Matrix& P, double tol)
{
    const auto N = P.cols();
    std::vector<int> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (P(0, a) != P(0, b)) return P(0, a) < P(0, b);
        return a < b;
    });
    std::vector<int> kept;
    std::vector<char> drop(static_cast<std::size_t>(N), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int a = order[i];
        if (drop[static_cast<std::size_t>(a)]) continue;
        kept.push_back(a);
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const int b = order[j];
            if (P(0, b) - P(0, a) > tol) break;
            if (!drop[static_cast<std::size_t>(b)] && (P.col(a) - P.col(b)).cwiseAbs().maxCoeff() <= tol)
                drop[static_cast<std::size_t>(b)] = 1;
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace detail

/// Triangulated boundary of conv(points). Near-duplicate points are merged
/// first; facet vertex indices refer to the original list.
/// Throws DegenerateInput if the points do not span the space.
inline BoundaryTriangulation boundary_triangulation(const std::vector<Vector>& points)
{
    if (points.empty()) throw DegenerateInput("empty point set");
    const int d = static_cast<int>(points.front().size());
    if (d < 1) throw DegenerateInput("zero-dimensional points");
    if (static_cast<int>(points.size()) < d + 1) throw DegenerateInput("fewer than n+1 points");

    Matrix raw(d, static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != d) throw DimensionMismatch("points of mixed dimension");
        raw.col(static_cast<Eigen::Index>(i)) = points[i];
    }
    const Vector lo = raw.rowwise().minCoeff();
    const Vector hi = raw.rowwise().maxCoeff();
    const Vector mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo).maxCoeff();
    if (!(half > 0.0) || !std::isfinite(half)) throw DegenerateInput("point set has no extent");
    const Matrix unit = (raw.colwise() - mid) / half;

    const std::vector<int> keep = detail::dedupe(unit, 1e-10);
    if (static_cast<int>(keep.size()) < d + 1) throw DegenerateInput("fewer than n+1 distinct points");
    Matrix base(d, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) base.col(static_cast<Eigen::Index>(i)) = unit.col(keep[i]);

    {
        const Matrix centered = base.colwise() - base.rowwise().mean();
        Eigen::JacobiSVD<Matrix> svd(centered);
        const auto& s = svd.singularValues();
        if (s(d - 1) <= 1e-9 * std::max(1.0, s(0))) throw DegenerateInput("point set is not full-dimensional");
    }

    const double jitters[] = {1e-11, 1e-9, 1e-7};
    std::string last_failure;
    for (std::size_t attempt = 0; attempt < std::size(jitters); ++attempt) {
        const double jitter = jitters[attempt];
        Matrix jit = base;
        CounterRng rng(RngSeed{0x5eedULL, attempt});
        for (Eigen::Index j = 0; j < jit.cols(); ++j)
            for (Eigen::Index i = 0; i < d; ++i) jit(i, j) += jitter * (2.0 * rng.uniform() - 1.0);

        std::vector<std::vector<int>> simplices;
        try {
            detail::QuickHull qh(jit, 1e-14 * d);
            simplices = qh.run();
        } catch (const detail::HullInconsistency&) {
            last_failure = "inconsistent ridge linking";
            continue;
        }

        BoundaryTriangulation out;
        out.dimension = d;
        out.jitter = jitter;
        std::vector<char> used(keep.size(), 0);
        for (const auto& s : simplices)
            for (int v : s) used[static_cast<std::size_t>(v)] = 1;
        Vector c = Vector::Zero(d);
        int count = 0;
        for (std::size_t i = 0; i < keep.size(); ++i)
            if (used[i]) {
                c += base.col(static_cast<Eigen::Index>(i));
                ++count;
            }
        c /= count;

        bool ok = true;
        double vol_unit = 0.0;
        const double tol = std::max(1e-10, 10.0 * jitter);
        Matrix pts(d, d);
        std::vector<const double*> cols(static_cast<std::size_t>(d));
        std::vector<double> work(static_cast<std::size_t>(d * d));
        for (const auto& s : simplices) {
            for (int i = 0; i < d; ++i) pts.col(i) = base.col(s[static_cast<std::size_t>(i)]);
            vol_unit += (pts.colwise() - c).determinant();
            BoundaryFacet f;
            double gram = 0.0;
            double unused = 0.0;
            detail::simplex_plane(pts, f.normal, unused, gram);
            double height = 0.0;
            for (int i = 0; i < d; ++i) cols[static_cast<std::size_t>(i)] = pts.col(i).data();
            f.shape = detail::simplex_thickness(cols.data(), d, work.data(), &height);
            f.offset = f.normal.dot(pts.col(0));
            if (f.normal.dot(c) > f.offset) {
                f.normal = -f.normal;
                f.offset = -f.offset;
            }
            if (f.shape >= detail::kSliverShape) {
                // A facet's plane tilts by about jitter/height when the
                // combinatorics were decided on perturbed coordinates.
                const double tol_f = tol + 10.0 * jitter * 2.0 * std::sqrt(static_cast<double>(d)) / height;
                for (Eigen::Index j = 0; j < base.cols(); ++j) {
                    if (f.normal.dot(base.col(j)) - f.offset > tol_f) {
                        ok = false;
                        break;
                    }
                }
            }
            // back to caller coordinates
            f.area = gram / detail::factorial(d - 1) * std::pow(half, d - 1);
            f.offset = f.offset * half + f.normal.dot(mid);
            f.vertices.reserve(static_cast<std::size_t>(d));
            for (int v : s) f.vertices.push_back(keep[static_cast<std::size_t>(v)]);
            out.facets.push_back(std::move(f));
            if (!ok) break;
        }
        if (!ok || !(vol_unit > 0.0)) {
            last_failure = "hull validation failed";
            continue;
        }
        out.volume = vol_unit / detail::factorial(d) * std::pow(half, d);
        out.interior = c * half + mid;
        for (std::size_t i = 0; i < keep.size(); ++i)
            if (used[i]) out.vertices.push_back(keep[i]);
        return out;
    }
    throw DegenerateInput("convex hull construction failed: " + last_failure);
}

} // namespace wulff
