#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace wulff {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult
{
    LpStatus status = LpStatus::infeasible;
    double value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd x;
};

/// Dense two-phase simplex for  max c.x  s.t.  A x <= b,  x >= 0.
/// Bland's rule on ties keeps degenerate problems from cycling.
class LinearProgram
{
public:
    LinearProgram(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  double eps = 1e-10)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), eps_(eps),
          B_(static_cast<std::size_t>(m_)), N_(static_cast<std::size_t>(n_ + 1)),
          D_(m_ + 2, n_ + 2)
    {
        D_.setZero();
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) D_(i, j) = A(i, j);
            B_[static_cast<std::size_t>(i)] = n_ + i;
            D_(i, n_) = -1.0;
            D_(i, n_ + 1) = b(i);
        }
        for (int j = 0; j < n_; ++j) {
            N_[static_cast<std::size_t>(j)] = j;
            D_(m_, j) = -c(j);
        }
        N_[static_cast<std::size_t>(n_)] = -1;
        D_(m_ + 1, n_) = 1.0;
    }

    LpResult solve()
    {
        LpResult out;
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (D_(i, n_ + 1) < D_(r, n_ + 1)) r = i;
        if (m_ > 0 && D_(r, n_ + 1) < -eps_) {
            pivot(r, n_);
            if (!simplex(1) || D_(m_ + 1, n_ + 1) < -eps_) {
                out.status = LpStatus::infeasible;
                return out;
            }
            for (int i = 0; i < m_; ++i) {
                if (B_[static_cast<std::size_t>(i)] == -1) {
                    int s = -1;
                    for (int j = 0; j <= n_; ++j)
                        if (s == -1 || D_(i, j) < D_(i, s) ||
                            (D_(i, j) == D_(i, s) && N_[static_cast<std::size_t>(j)] < N_[static_cast<std::size_t>(s)]))
                            s = j;
                    pivot(i, s);
                }
            }
        }
        if (!simplex(2)) {
            out.status = LpStatus::unbounded;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        out.status = LpStatus::optimal;
        out.x = Eigen::VectorXd::Zero(n_);
        for (int i = 0; i < m_; ++i) {
            const int bi = B_[static_cast<std::size_t>(i)];
            if (bi >= 0 && bi < n_) out.x(bi) = D_(i, n_ + 1);
        }
        out.value = D_(m_, n_ + 1);
        return out;
    }

private:
    void pivot(int r, int s)
    {
        const double inv = 1.0 / D_(r, s);
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r) continue;
            const double f = D_(i, s) * inv;
            if (f == 0.0) continue;
            for (int j = 0; j < n_ + 2; ++j)
                if (j != s) D_(i, j) -= D_(r, j) * f;
            D_(i, s) = -f;
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) D_(r, j) *= inv;
        D_(r, s) = inv;
        std::swap(B_[static_cast<std::size_t>(r)], N_[static_cast<std::size_t>(s)]);
    }

    bool simplex(int phase)
    {
        const int x = phase == 1 ? m_ + 1 : m_;
        while (true) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (phase == 2 && N_[static_cast<std::size_t>(j)] == -1) continue;
                if (s == -1 || D_(x, j) < D_(x, s) ||
                    (D_(x, j) == D_(x, s) && N_[static_cast<std::size_t>(j)] < N_[static_cast<std::size_t>(s)]))
                    s = j;
            }
            if (D_(x, s) > -eps_) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (D_(i, s) < eps_) continue;
                if (r == -1) {
                    r = i;
                    continue;
                }
                const double lhs = D_(i, n_ + 1) / D_(i, s);
                const double rhs = D_(r, n_ + 1) / D_(r, s);
                if (lhs < rhs || (lhs == rhs && B_[static_cast<std::size_t>(i)] < B_[static_cast<std::size_t>(r)]))
                    r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    int m_;
    int n_;
    double eps_;
    std::vector<int> B_;
    std::vector<int> N_;
    Eigen::MatrixXd D_;
};

/// Chebyshev centre of {y : a_i.y <= b_i} with unit-norm rows a_i: the centre
/// and radius of the largest inscribed ball. Radius < 0 signals an empty set.
struct ChebyshevCenter
{
    Eigen::VectorXd center;
    double radius = -1.0;
};

inline ChebyshevCenter chebyshev_center(const Eigen::MatrixXd& normals, const Eigen::VectorXd& offsets,
                                        const Eigen::VectorXd& origin_hint)
{
    const auto m = normals.rows();
    const auto n = normals.cols();
    // Variables (y+, y-, r) with y = origin_hint + y+ - y-.
    Eigen::MatrixXd A(m, 2 * n + 1);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        A.row(i).head(n) = normals.row(i);
        A.row(i).segment(n, n) = -normals.row(i);
        A(i, 2 * n) = normals.row(i).norm();
        b(i) = offsets(i) - normals.row(i).dot(origin_hint);
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n + 1);
    c(2 * n) = 1.0;
    auto res = LinearProgram(A, b, c).solve();
    ChebyshevCenter out;
    if (res.status != LpStatus::optimal) return out;
    out.center = origin_hint + res.x.head(n) - res.x.segment(n, n);
    out.radius = res.x(2 * n);
    return out;
}

} // namespace wulff
