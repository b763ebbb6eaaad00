#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "peaklab/linalg.hpp"
#include "peaklab/simplex.hpp"

namespace peaklab {

struct HRep {
    rmat a;
    rvec b;
    int dim() const { return a.empty() ? 0 : static_cast<int>(a[0].size()); }
};

namespace hull_detail {

inline bool near(const rvec& x, const rvec& y, double tol) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::fabs(x[i] - y[i]) > tol) return false;
    return true;
}

inline void dedupe_points(std::vector<rvec>& pts, double tol) {
    std::vector<rvec> out;
    for (const rvec& p : pts) {
        bool seen = false;
        for (const rvec& q : out)
            if (near(p, q, tol)) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    pts.swap(out);
}

} // namespace hull_detail

// Vertices of an H-polyhedron in dimension <= 3: solve every d-subset of
// rows, keep feasible solutions. Desk-scale row counts only.
inline std::vector<rvec> enumerate_vertices(const HRep& h, double tol = 1e-7) {
    const int d = h.dim();
    const std::size_t m = h.a.size();
    std::vector<rvec> verts;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d));
    auto feasible = [&](const rvec& x) {
        for (std::size_t i = 0; i < m; ++i)
            if (dot(h.a[i], x) > h.b[i] + tol) return false;
        return true;
    };
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int chosen) {
        if (chosen == d) {
            rmat sys;
            rvec rhs;
            for (int i = 0; i < d; ++i) {
                sys.push_back(h.a[idx[static_cast<std::size_t>(i)]]);
                rhs.push_back(h.b[idx[static_cast<std::size_t>(i)]]);
            }
            rvec x;
            if (solve_square(sys, rhs, x, 1e-9) && feasible(x)) verts.push_back(x);
            return;
        }
        for (std::size_t i = start; i < m; ++i) {
            idx[static_cast<std::size_t>(chosen)] = i;
            rec(i + 1, chosen + 1);
        }
    };
    rec(0, 0);
    hull_detail::dedupe_points(verts, 1e-7);
    return verts;
}

// Generators (unit directions) of the recession cone {A d <= 0}.
// Candidates come from row normals and their perpendiculars; interior rays
// are harmless for hull generation so no extremality filtering is done.
inline std::vector<rvec> recession_rays(const rmat& a, int dim, double tol = 1e-9) {
    std::vector<rvec> cands;
    if (dim == 1) {
        cands.push_back({1.0});
        cands.push_back({-1.0});
    } else {
        for (const rvec& row : a) {
            cands.push_back(scale(-1.0, row));
            if (dim == 2) {
                cands.push_back({-row[1], row[0]});
                cands.push_back({row[1], -row[0]});
            } else if (dim == 3) {
                for (const rvec& other : a) {
                    rvec c = {row[1] * other[2] - row[2] * other[1],
                              row[2] * other[0] - row[0] * other[2],
                              row[0] * other[1] - row[1] * other[0]};
                    cands.push_back(c);
                    cands.push_back(scale(-1.0, c));
                }
            }
        }
        // Coordinate directions cover cones wider than any row pair spans.
        for (int j = 0; j < dim; ++j) {
            rvec e(static_cast<std::size_t>(dim), 0.0);
            e[static_cast<std::size_t>(j)] = 1.0;
            cands.push_back(e);
            cands.push_back(scale(-1.0, e));
        }
    }
    std::vector<rvec> rays;
    for (rvec c : cands) {
        double n = norm2(c);
        if (n < tol) continue;
        c = scale(1.0 / n, c);
        bool inside = true;
        for (const rvec& row : a)
            if (dot(row, c) > tol) {
                inside = false;
                break;
            }
        if (inside) rays.push_back(c);
    }
    hull_detail::dedupe_points(rays, 1e-9);
    return rays;
}

// H-representation of conv(points) + cone(rays) in dimension 1..3.
// Candidate facet hyperplanes are spanned by generator subsets; a candidate
// survives if every point lies on its inner side and every ray points inward.
// The result may carry redundant rows; callers prune via LP when they care.
inline HRep hull_hrep(const std::vector<rvec>& points_in, const std::vector<rvec>& rays,
                      int dim, double tol = 1e-9) {
    std::vector<rvec> points(points_in);
    hull_detail::dedupe_points(points, 1e-10);
    if (points.empty()) throw DomainViolation("hull_hrep: need at least one point");

    HRep h;
    auto emit = [&](rvec n, double rhs) {
        double nn = norm2(n);
        if (nn < tol) return;
        n = scale(1.0 / nn, n);
        rhs /= nn;
        for (std::size_t i = 0; i < h.a.size(); ++i)
            if (hull_detail::near(h.a[i], n, 1e-9) && std::fabs(h.b[i] - rhs) < 1e-9) return;
        h.a.push_back(n);
        h.b.push_back(rhs);
    };

    // Facet filter for full-dimensional hulls: a supporting line/plane only
    // matters when enough generators touch it. Degenerate hulls keep every
    // supporting candidate (their cap rows touch a single point).
    bool full_dim = false;
    {
        rmat span;
        for (std::size_t i = 1; i < points.size(); ++i) span.push_back(sub(points[i], points[0]));
        for (const rvec& r : rays) span.push_back(r);
        full_dim = matrix_rank(span) >= dim;
    }

    auto try_normal = [&](const rvec& n) {
        double nn = norm2(n);
        if (nn < tol) return;
        for (double sign : {1.0, -1.0}) {
            rvec cand = scale(sign / nn, n);
            double rhs = -1e300;
            for (const rvec& p : points) rhs = std::max(rhs, dot(cand, p));
            bool ok = true;
            for (const rvec& r : rays)
                if (dot(cand, r) > tol) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            if (full_dim) {
                int touching = 0;
                for (const rvec& p : points)
                    if (dot(cand, p) >= rhs - 1e-9) ++touching;
                for (const rvec& r : rays)
                    if (std::fabs(dot(cand, r)) <= 1e-9) ++touching;
                if (touching < dim) continue;
            }
            emit(cand, rhs);
        }
    };

    if (dim == 1) {
        try_normal({1.0});
    } else {
        // Spanning sets: dim-1 vectors drawn from point differences and rays.
        std::vector<rvec> gens;
        for (std::size_t i = 1; i < points.size(); ++i) gens.push_back(sub(points[i], points[0]));
        for (std::size_t i = 1; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                gens.push_back(sub(points[j], points[i]));
        for (const rvec& r : rays) gens.push_back(r);

        if (dim == 2) {
            for (const rvec& g : gens) {
                try_normal({-g[1], g[0]});
                try_normal(g); // caps for degenerate (collinear) hulls
            }
            if (gens.empty()) {
                try_normal({1.0, 0.0});
                try_normal({0.0, 1.0});
            }
        } else {
            for (std::size_t i = 0; i < gens.size(); ++i)
                for (std::size_t j = i + 1; j < gens.size(); ++j) {
                    const rvec &u = gens[i], &v = gens[j];
                    try_normal({u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                u[0] * v[1] - u[1] * v[0]});
                }
            // Caps and degenerate spans.
            for (const rvec& g : gens) {
                try_normal(g);
                try_normal({-g[1], g[0], 0.0});
                try_normal({0.0, -g[2], g[1]});
                try_normal({-g[2], 0.0, g[0]});
            }
            if (gens.empty())
                for (int k = 0; k < 3; ++k) {
                    rvec e(3, 0.0);
                    e[static_cast<std::size_t>(k)] = 1.0;
                    try_normal(e);
                }
        }
    }
    return h;
}

// Drop rows that the rest of the system already implies.
inline HRep prune_redundant(const HRep& h, double tol = 1e-8) {
    HRep out;
    for (std::size_t i = 0; i < h.a.size(); ++i) {
        rmat rest;
        rvec rest_b;
        for (std::size_t j = 0; j < h.a.size(); ++j) {
            if (j == i) continue;
            rest.push_back(h.a[j]);
            rest_b.push_back(h.b[j]);
        }
        if (rest.empty()) {
            out.a.push_back(h.a[i]);
            out.b.push_back(h.b[i]);
            continue;
        }
        LpResult r = lp_maximize(rest, rest_b, h.a[i]);
        if (r.unbounded() || (r.optimal() && r.value > h.b[i] + tol)) {
            out.a.push_back(h.a[i]);
            out.b.push_back(h.b[i]);
        }
    }
    return out.a.empty() ? h : out;
}

// Fourier-Motzkin elimination of the last coordinate.
inline HRep fourier_motzkin_drop_last(const HRep& h, double tol = 1e-9) {
    const int d = h.dim();
    HRep out;
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t i = 0; i < h.a.size(); ++i) {
        double c = h.a[i][static_cast<std::size_t>(d - 1)];
        if (c > tol)
            pos.push_back(i);
        else if (c < -tol)
            neg.push_back(i);
        else
            zero.push_back(i);
    }
    auto chop = [&](const rvec& row) { return rvec(row.begin(), row.end() - 1); };
    for (std::size_t i : zero) {
        out.a.push_back(chop(h.a[i]));
        out.b.push_back(h.b[i]);
    }
    for (std::size_t i : pos)
        for (std::size_t j : neg) {
            double ci = h.a[i][static_cast<std::size_t>(d - 1)];
            double cj = -h.a[j][static_cast<std::size_t>(d - 1)];
            rvec row = add(scale(cj, chop(h.a[i])), scale(ci, chop(h.a[j])));
            double rhs = cj * h.b[i] + ci * h.b[j];
            double nn = norm2(row);
            if (nn < tol) continue;
            out.a.push_back(scale(1.0 / nn, row));
            out.b.push_back(rhs / nn);
        }
    if (out.a.empty() && d > 1) {
        // Unconstrained projection: emit a vacuous row so the HRep stays valid.
        rvec row(static_cast<std::size_t>(d - 1), 0.0);
        row[0] = 1.0;
        out.a.push_back(row);
        out.b.push_back(1e9);
    }
    return prune_redundant(out);
}

} // namespace peaklab
