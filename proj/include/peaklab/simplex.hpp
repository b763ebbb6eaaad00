#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "peaklab/linalg.hpp"

namespace peaklab {

// Dense two-phase primal simplex for the tiny LPs behind the polyhedral
// operations: maximize c.x subject to A x <= b with x free in sign.
// Bland's rule keeps the pivoting deterministic and cycle-free; problem
// sizes here are a few dozen rows at most.
struct LpResult {
    enum class Status { Optimal, Unbounded, Infeasible };
    Status status = Status::Infeasible;
    rvec x;
    double value = 0.0;

    bool optimal() const { return status == Status::Optimal; }
    bool unbounded() const { return status == Status::Unbounded; }
};

class SimplexSolver {
public:
    static LpResult maximize(const rmat& a, const rvec& b, const rvec& c) {
        const std::size_t m = a.size();
        const std::size_t n = c.size();
        // Standard form: y = (u, v, s) >= 0, x = u - v, A u - A v + s = b'.
        const std::size_t nv = 2 * n + m;
        rmat rows(m, rvec(nv, 0.0));
        rvec rhs(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                rows[i][j] = a[i][j];
                rows[i][n + j] = -a[i][j];
            }
            rows[i][2 * n + i] = 1.0;
            rhs[i] = b[i];
            if (rhs[i] < 0.0) {
                for (double& v : rows[i]) v = -v;
                rhs[i] = -rhs[i];
            }
        }
        rvec obj(nv, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            obj[j] = c[j];
            obj[n + j] = -c[j];
        }

        Tableau t;
        t.init(rows, rhs, obj);
        if (!t.phase1()) return {LpResult::Status::Infeasible, {}, 0.0};
        if (!t.phase2()) return {LpResult::Status::Unbounded, {}, 0.0};

        rvec y = t.solution();
        LpResult res;
        res.status = LpResult::Status::Optimal;
        res.x.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) res.x[j] = y[j] - y[n + j];
        res.value = dot(c, res.x);
        return res;
    }

private:
    struct Tableau {
        // data[i] holds row i of [B^-1 A | B^-1 b]; the last two rows carry the
        // phase-2 and phase-1 reduced objectives.
        rmat data;
        std::vector<std::size_t> basis;
        std::size_t m = 0, total = 0, art0 = 0;
        static constexpr double eps = 1e-11;

        void init(const rmat& rows, const rvec& rhs, const rvec& obj) {
            m = rows.size();
            const std::size_t nv = rows.empty() ? 0 : rows[0].size();
            art0 = nv;
            total = nv + m;
            data.assign(m + 2, rvec(total + 1, 0.0));
            basis.assign(m, 0);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < nv; ++j) data[i][j] = rows[i][j];
                data[i][art0 + i] = 1.0;
                data[i][total] = rhs[i];
                basis[i] = art0 + i;
            }
            // Row m: phase-2 objective (as minimization of -obj).
            for (std::size_t j = 0; j < nv; ++j) data[m][j] = -obj[j];
            // Row m+1: phase-1 objective = sum of artificials, reduced.
            for (std::size_t j = 0; j <= total; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += data[i][j];
                data[m + 1][j] = -s;
            }
            for (std::size_t i = 0; i < m; ++i) data[m + 1][art0 + i] = 0.0;
        }

        void pivot(std::size_t pr, std::size_t pc) {
            double d = data[pr][pc];
            for (double& v : data[pr]) v /= d;
            for (std::size_t r = 0; r < data.size(); ++r) {
                if (r == pr) continue;
                double f = data[r][pc];
                if (f == 0.0) continue;
                for (std::size_t cidx = 0; cidx <= total; ++cidx)
                    data[r][cidx] -= f * data[pr][cidx];
            }
            basis[pr] = pc;
        }

        // Runs simplex on objective row `orow` over columns [0, limit).
        // Returns false on unbounded objective.
        bool iterate(std::size_t orow, std::size_t limit) {
            for (;;) {
                // Bland: smallest index with negative reduced cost.
                std::size_t pc = limit;
                for (std::size_t j = 0; j < limit; ++j) {
                    if (data[orow][j] < -eps) {
                        pc = j;
                        break;
                    }
                }
                if (pc == limit) return true;
                std::size_t pr = m;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < m; ++i) {
                    if (data[i][pc] > eps) {
                        double ratio = data[i][total] / data[i][pc];
                        if (ratio < best - eps ||
                            (ratio < best + eps && (pr == m || basis[i] < basis[pr]))) {
                            best = ratio;
                            pr = i;
                        }
                    }
                }
                if (pr == m) return false;
                pivot(pr, pc);
            }
        }

        bool phase1() {
            if (!iterate(m + 1, total)) return false;
            if (data[m + 1][total] < -1e-8) return false;
            // Kick remaining artificials out of the basis when possible.
            for (std::size_t i = 0; i < m; ++i) {
                if (basis[i] >= art0) {
                    for (std::size_t j = 0; j < art0; ++j) {
                        if (std::fabs(data[i][j]) > eps) {
                            pivot(i, j);
                            break;
                        }
                    }
                }
            }
            return true;
        }

        bool phase2() { return iterate(m, art0); }

        rvec solution() const {
            rvec y(art0, 0.0);
            for (std::size_t i = 0; i < m; ++i)
                if (basis[i] < art0) y[basis[i]] = data[i][total];
            return y;
        }
    };
};

inline LpResult lp_maximize(const rmat& a, const rvec& b, const rvec& c) {
    return SimplexSolver::maximize(a, b, c);
}

} // namespace peaklab
