#pragma once

#include <limits>
#include <vector>

namespace wulff {

/// Dense linear assignment, Jonker-Volgenant: column reduction, two bounded
/// rounds of augmenting row reduction, then shortest augmenting paths for the
/// rows left.
/// `cost` is row-major n x n. Returns the column assigned to each row.
inline std::vector<int> solve_assignment(const std::vector<double>& cost, int n, double* total = nullptr)
{
    std::vector<int> x(static_cast<std::size_t>(n), -1), y(static_cast<std::size_t>(n), -1);
    std::vector<double> v(static_cast<std::size_t>(n));
    auto c = [&](int i, int j) { return cost[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]; };
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n == 0) {
        if (total) *total = 0.0;
        return x;
    }

    std::vector<int> matches(static_cast<std::size_t>(n), 0);
    for (int j = n - 1; j >= 0; --j) {
        double m = c(0, j);
        int imin = 0;
        for (int i = 1; i < n; ++i)
            if (c(i, j) < m) {
                m = c(i, j);
                imin = i;
            }
        v[j] = m;
        if (++matches[imin] == 1) {
            x[imin] = j;
            y[j] = imin;
        } else {
            y[j] = -1;
        }
    }

    std::vector<int> free_rows;
    for (int i = 0; i < n; ++i) {
        if (matches[i] == 0) {
            free_rows.push_back(i);
        } else if (matches[i] == 1) {
            const int j1 = x[i];
            double m = inf;
            for (int j = 0; j < n; ++j)
                if (j != j1 && c(i, j) - v[j] < m) m = c(i, j) - v[j];
            if (m < inf) v[j1] -= m;
        }
    }

    for (int round = 0; round < 2; ++round) {
        std::size_t k = 0;
        const std::size_t previous = free_rows.size();
        std::size_t kept = 0;
        // Near-ties can start a long price war here; past a linear budget the
        // remaining rows are left to the augmenting-path phase.
        std::size_t budget = 2 * static_cast<std::size_t>(n);
        while (k < previous && budget-- > 0) {
            const int i = free_rows[k++];
            double umin = c(i, 0) - v[0], usub = inf;
            int j1 = 0, j2 = -1;
            for (int j = 1; j < n; ++j) {
                const double h = c(i, j) - v[j];
                if (h < usub) {
                    if (h >= umin) {
                        usub = h;
                        j2 = j;
                    } else {
                        usub = umin;
                        umin = h;
                        j2 = j1;
                        j1 = j;
                    }
                }
            }
            int i0 = y[j1];
            if (umin < usub) {
                v[j1] -= usub - umin;
            } else if (i0 >= 0 && j2 >= 0) {
                j1 = j2;
                i0 = y[j2];
            }
            if (i0 >= 0) x[i0] = -1;
            x[i] = j1;
            y[j1] = i;
            if (i0 >= 0) {
                if (umin < usub) {
                    free_rows[--k] = i0;
                } else {
                    free_rows[kept++] = i0;
                }
            }
        }
        for (; k < previous; ++k) free_rows[kept++] = free_rows[k];
        free_rows.resize(kept);
    }

    std::vector<double> d(static_cast<std::size_t>(n));
    std::vector<int> pred(static_cast<std::size_t>(n)), cols(static_cast<std::size_t>(n));
    for (const int f : free_rows) {
        for (int j = 0; j < n; ++j) {
            d[j] = c(f, j) - v[j];
            pred[j] = f;
            cols[j] = j;
        }
        int low = 0, up = 0, last = 0, end = -1;
        double m = 0.0;
        while (end < 0) {
            if (up == low) {
                last = low - 1;
                m = d[cols[up++]];
                for (int k = up; k < n; ++k) {
                    const int j = cols[k];
                    const double h = d[j];
                    if (h <= m) {
                        if (h < m) {
                            up = low;
                            m = h;
                        }
                        cols[k] = cols[up];
                        cols[up++] = j;
                    }
                }
                for (int k = low; k < up; ++k)
                    if (y[cols[k]] < 0) {
                        end = cols[k];
                        break;
                    }
            }
            if (end < 0) {
                const int j1 = cols[low++];
                const int i = y[j1];
                const double u1 = c(i, j1) - v[j1] - m;
                for (int k = up; k < n; ++k) {
                    const int j = cols[k];
                    const double h = c(i, j) - v[j] - u1;
                    if (h < d[j]) {
                        pred[j] = i;
                        if (h == m) {
                            if (y[j] < 0) {
                                end = j;
                                break;
                            }
                            cols[k] = cols[up];
                            cols[up++] = j;
                        }
                        d[j] = h;
                    }
                }
            }
        }
        for (int k = 0; k <= last; ++k) {
            const int j = cols[k];
            v[j] += d[j] - m;
        }
        for (;;) {
            const int i = pred[end];
            y[end] = i;
            const int next = x[i];
            x[i] = end;
            if (i == f) break;
            end = next;
        }
    }

    if (total) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += c(i, x[i]);
        *total = s;
    }
    return x;
}

} // namespace wulff
