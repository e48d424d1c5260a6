#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace wulff {

struct NelderMeadOptions
{
    double initial_step = 0.1;   // edge length of the starting simplex
    double x_tolerance = 1e-6;   // stop when the simplex diameter drops below this
    double memo_grid = 0.0;      // > 0: cache objective values on this lattice
    int max_evaluations = 4000;
};

struct NelderMeadResult
{
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Minimizes `f` from `x0` with the standard reflection/expansion/contraction/shrink moves.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x0, const NelderMeadOptions& opt = {})
{
    const auto n = x0.size();
    std::map<std::vector<std::int64_t>, double> memo;
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        if (opt.memo_grid > 0.0) {
            std::vector<std::int64_t> key(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i)
                key[static_cast<std::size_t>(i)] = std::llround(x(i) / opt.memo_grid);
            if (auto it = memo.find(key); it != memo.end()) return it->second;
            ++evals;
            const double v = f(x);
            memo.emplace(std::move(key), v);
            return v;
        }
        ++evals;
        return f(x);
    };

    std::vector<Eigen::VectorXd> s(static_cast<std::size_t>(n + 1), x0);
    for (Eigen::Index i = 0; i < n; ++i) s[static_cast<std::size_t>(i + 1)](i) += opt.initial_step;
    std::vector<double> fv(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) fv[i] = eval(s[i]);
    std::vector<std::size_t> idx(s.size());

    NelderMeadResult out;
    while (true) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        double diam = 0.0;
        for (std::size_t i = 1; i < s.size(); ++i)
            diam = std::max(diam, (s[idx[i]] - s[idx[0]]).norm());
        if (diam < opt.x_tolerance) {
            out.converged = true;
            break;
        }
        if (evals >= opt.max_evaluations) break;

        const std::size_t best = idx[0];
        const std::size_t worst = idx.back();
        const std::size_t second = idx[idx.size() - 2];
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) centroid += s[idx[i]];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + (centroid - s[worst]);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - s[worst]);
            const double fe = eval(xe);
            if (fe < fr) {
                s[worst] = xe;
                fv[worst] = fe;
            } else {
                s[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            s[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                           : Eigen::VectorXd(centroid + 0.5 * (s[worst] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[worst])) {
            s[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 1; i < idx.size(); ++i) {
            s[idx[i]] = s[best] + 0.5 * (s[idx[i]] - s[best]);
            fv[idx[i]] = eval(s[idx[i]]);
        }
    }
    out.x = s[idx[0]];
    out.value = fv[idx[0]];
    out.evaluations = evals;
    return out;
}

} // namespace wulff
