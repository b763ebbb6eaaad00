#include "peaklab/reinhardt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peaklab/rng.hpp"

namespace peaklab::reinhardt {

using nlohmann::json;

namespace {

rvec apply_perm(const rvec& x, const std::vector<int>& perm) {
    rvec out(x.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        out[i] = x[static_cast<std::size_t>(perm[i])];
    return out;
}

std::vector<long long> undo_perm(const std::vector<long long>& e, const std::vector<int>& perm) {
    std::vector<long long> out(e.size(), 0);
    for (std::size_t i = 0; i < perm.size(); ++i)
        out[static_cast<std::size_t>(perm[i])] = e[i];
    return out;
}

rvec drop_last(const rvec& x) { return rvec(x.begin(), x.end() - 1); }

// Bounding box of the polyhedron; coordinates unbounded below are clipped
// `depth` under the box top so log samples still reach deep moduli.
struct Box {
    rvec lo, hi;
};

Box bounding_box(const HRep& h, double depth = 40.0) {
    const int d = h.dim();
    Box box;
    box.lo.assign(static_cast<std::size_t>(d), 0.0);
    box.hi.assign(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        rvec c(static_cast<std::size_t>(d), 0.0);
        c[static_cast<std::size_t>(j)] = 1.0;
        LpResult up = lp_maximize(h.a, h.b, c);
        if (!up.optimal())
            throw DomainViolation("bounding_box: coordinate unbounded above");
        c[static_cast<std::size_t>(j)] = -1.0;
        LpResult down = lp_maximize(h.a, h.b, c);
        box.hi[static_cast<std::size_t>(j)] = up.value;
        box.lo[static_cast<std::size_t>(j)] =
            down.optimal() ? -down.value : up.value - depth;
    }
    return box;
}

std::vector<rvec> sample_hrep(const HRep& h, int count, std::uint64_t seed) {
    Box box = bounding_box(h);
    DetRng rng(seed);
    std::vector<rvec> out;
    const int d = h.dim();
    long long tries = 0, cap = 4000LL * count + 200000;
    while (static_cast<int>(out.size()) < count) {
        if (++tries > cap)
            throw Error("sample_hrep: rejection sampling stalled (thin polyhedron?)");
        rvec x(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            x[static_cast<std::size_t>(j)] =
                rng.uniform(box.lo[static_cast<std::size_t>(j)], box.hi[static_cast<std::size_t>(j)]);
        bool ok = true;
        for (std::size_t i = 0; i < h.a.size() && ok; ++i)
            ok = dot(h.a[i], x) <= h.b[i];
        if (ok) out.push_back(x);
    }
    return out;
}

} // namespace

// ---- LogPolyhedron ------------------------------------------------------

LogPolyhedron::LogPolyhedron(rmat rows, rvec rhs, const ToleranceProfile& tol) {
    tol.validate();
    if (rows.empty() || rows.size() != rhs.size())
        throw DomainViolation("LogPolyhedron: rows/rhs mismatch or empty");
    dim_ = static_cast<int>(rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double n = norm2(rows[i]);
        if (n < 1e-14) throw DomainViolation("LogPolyhedron: zero row normal");
        rep_.a.push_back(scale(1.0 / n, rows[i]));
        rep_.b.push_back(rhs[i] / n);
    }

    // Interior certificate: max t <= 1 with <l_i,x> + t <= b_i.
    {
        rmat a2;
        rvec b2, c(static_cast<std::size_t>(dim_) + 1, 0.0);
        for (std::size_t i = 0; i < rep_.a.size(); ++i) {
            rvec row = rep_.a[i];
            row.push_back(1.0);
            a2.push_back(row);
            b2.push_back(rep_.b[i]);
        }
        rvec trow(static_cast<std::size_t>(dim_) + 1, 0.0);
        trow.back() = 1.0;
        a2.push_back(trow);
        b2.push_back(1.0);
        c.back() = 1.0;
        LpResult r = lp_maximize(a2, b2, c);
        if (!r.optimal() || r.value <= tol.lp_feas_tol)
            throw DomainViolation("LogPolyhedron: empty interior");
        interior_.assign(r.x.begin(), r.x.end() - 1);
    }

    // Every coordinate bounded above <=> recession cone inside (R_{<=0})^n.
    for (int j = 0; j < dim_; ++j) {
        rmat a2 = rep_.a;
        rvec b2(rep_.a.size(), 0.0);
        rvec cap(static_cast<std::size_t>(dim_), 0.0);
        cap[static_cast<std::size_t>(j)] = 1.0;
        a2.push_back(cap);
        b2.push_back(1.0);
        LpResult r = lp_maximize(a2, b2, cap);
        if (!r.optimal() || r.value > tol.lp_feas_tol)
            throw DomainViolation("LogPolyhedron: recession cone leaves (R_<=0)^n at coordinate " +
                                  std::to_string(j + 1));
    }
}

bool LogPolyhedron::contains(const rvec& x, double slack) const {
    return max_violation(x) <= slack;
}

double LogPolyhedron::max_violation(const rvec& x) const {
    double v = -1e300;
    for (std::size_t i = 0; i < rep_.a.size(); ++i) v = std::max(v, dot(rep_.a[i], x) - rep_.b[i]);
    return v;
}

json LogPolyhedron::to_json() const {
    json rows = json::array();
    for (const rvec& r : rep_.a) rows.push_back(r);
    return json{{"A", rows}, {"b", rep_.b}};
}

LogPolyhedron LogPolyhedron::from_json(const json& j, const ToleranceProfile& tol) {
    rmat a;
    for (const auto& row : j.at("A")) a.push_back(row.get<rvec>());
    rvec b = j.at("b").get<rvec>();
    return LogPolyhedron(std::move(a), std::move(b), tol);
}

// ---- ReinhardtDomain ----------------------------------------------------

ReinhardtDomain::ReinhardtDomain(std::vector<LogPolyhedron> ps, std::vector<bool> axes,
                                 const ToleranceProfile& tol)
    : pieces(std::move(ps)), meets_axes(std::move(axes)) {
    if (pieces.empty()) throw DomainViolation("ReinhardtDomain: no pieces");
    const int d = pieces.front().dim();
    for (const auto& p : pieces)
        if (p.dim() != d) throw DomainViolation("ReinhardtDomain: mixed dimensions");
    if (static_cast<int>(meets_axes.size()) != d)
        throw DomainViolation("ReinhardtDomain: meets_axes size must equal dimension");

    // Connectivity of the union via the pairwise interior-overlap graph.
    const std::size_t m = pieces.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            rmat a2;
            rvec b2;
            for (std::size_t r = 0; r < pieces[i].rows().size(); ++r) {
                rvec row = pieces[i].rows()[r];
                row.push_back(1.0);
                a2.push_back(row);
                b2.push_back(pieces[i].rhs()[r]);
            }
            for (std::size_t r = 0; r < pieces[j].rows().size(); ++r) {
                rvec row = pieces[j].rows()[r];
                row.push_back(1.0);
                a2.push_back(row);
                b2.push_back(pieces[j].rhs()[r]);
            }
            rvec trow(static_cast<std::size_t>(d) + 1, 0.0);
            trow.back() = 1.0;
            a2.push_back(trow);
            b2.push_back(1.0);
            rvec c(static_cast<std::size_t>(d) + 1, 0.0);
            c.back() = 1.0;
            LpResult r = lp_maximize(a2, b2, c);
            if (r.optimal() && r.value > tol.lp_feas_tol) parent[find(i)] = find(j);
        }
    std::size_t root = find(0);
    for (std::size_t i = 1; i < m; ++i)
        if (find(i) != root)
            throw DomainViolation("ReinhardtDomain: union of pieces is not connected");
}

bool ReinhardtDomain::log_contains(const rvec& x, double slack) const {
    for (const auto& p : pieces)
        if (p.contains(x, slack)) return true;
    return false;
}

json ReinhardtDomain::to_json() const {
    json ps = json::array();
    for (const auto& p : pieces) ps.push_back(p.to_json());
    json axes = json::array();
    for (bool b : meets_axes) axes.push_back(b);
    return json{{"type", "reinhardt"}, {"pieces", ps}, {"meets_axes", axes}};
}

ReinhardtDomain ReinhardtDomain::from_json(const json& j, const ToleranceProfile& tol) {
    std::vector<LogPolyhedron> ps;
    for (const auto& pj : j.at("pieces")) ps.push_back(LogPolyhedron::from_json(pj, tol));
    std::vector<bool> axes;
    for (const auto& b : j.at("meets_axes")) axes.push_back(b.get<bool>());
    return ReinhardtDomain(std::move(ps), std::move(axes), tol);
}

// ---- LaurentMonomial ----------------------------------------------------

cplx LaurentMonomial::evaluate(const cvec& z) const {
    if (z.size() != exponent.size())
        throw DomainViolation("LaurentMonomial: dimension mismatch");
    cplx acc = coeff;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (exponent[j] == 0) continue;
        if (z[j] == cplx(0.0)) {
            if (exponent[j] < 0)
                throw DomainViolation("LaurentMonomial: negative exponent at vanishing coordinate");
            return cplx(0.0);
        }
        acc *= std::pow(z[j], static_cast<double>(exponent[j]));
    }
    return acc;
}

double LaurentMonomial::log_modulus(const rvec& x) const {
    double s = std::log(std::abs(coeff));
    for (std::size_t j = 0; j < x.size(); ++j) s += static_cast<double>(exponent[j]) * x[j];
    return s;
}

json LaurentMonomial::to_json() const {
    return json{{"coeff", {coeff.real(), coeff.imag()}}, {"exponent", exponent}};
}

// ---- basic operations ---------------------------------------------------

rvec log_map(const cvec& z) {
    rvec x(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        double m = std::abs(z[j]);
        if (m == 0.0) throw AxisPoint("log_map: coordinate " + std::to_string(j + 1) + " vanishes");
        x[j] = std::log(m);
    }
    return x;
}

bool is_extreme(const HRep& p, const rvec& x0, const ToleranceProfile& tol) {
    double worst = -1e300;
    for (std::size_t i = 0; i < p.a.size(); ++i) worst = std::max(worst, dot(p.a[i], x0) - p.b[i]);
    if (worst > 10 * tol.lp_feas_tol)
        throw NotInClosure("is_extreme: point violates the H-representation");
    rmat active;
    for (std::size_t i = 0; i < p.a.size(); ++i)
        if (std::fabs(dot(p.a[i], x0) - p.b[i]) <= std::max(tol.lp_feas_tol, 1e-9))
            active.push_back(p.a[i]);
    if (active.empty()) return false;
    return matrix_rank(active) == p.dim();
}

SupportFunctional support_at(const HRep& p, const rvec& x0, const ToleranceProfile& tol) {
    rmat active;
    for (std::size_t i = 0; i < p.a.size(); ++i)
        if (std::fabs(dot(p.a[i], x0) - p.b[i]) <= std::max(tol.lp_feas_tol, 1e-9))
            active.push_back(p.a[i]);
    if (active.empty()) throw NotOnBoundary("support_at: point is not on the boundary");

    const int d = p.dim();
    rvec l(static_cast<std::size_t>(d), 0.0);
    for (const rvec& row : active) l = add(l, scale(1.0 / norm2(row), row));
    l = scale(1.0 / static_cast<double>(active.size()), l);

    SupportFunctional sf;
    sf.perm.resize(static_cast<std::size_t>(d));
    std::iota(sf.perm.begin(), sf.perm.end(), 0);
    int pivot = d - 1;
    if (std::fabs(l[static_cast<std::size_t>(pivot)]) <= 1e-12) {
        for (int j = 0; j < d; ++j)
            if (std::fabs(l[static_cast<std::size_t>(j)]) >
                std::fabs(l[static_cast<std::size_t>(pivot)]))
                pivot = j;
        std::swap(sf.perm[static_cast<std::size_t>(d - 1)], sf.perm[static_cast<std::size_t>(pivot)]);
    }
    double piv = std::fabs(l[static_cast<std::size_t>(sf.perm[static_cast<std::size_t>(d - 1)])]);
    if (piv <= 1e-14) throw Error("support_at: zero supporting functional");
    // Scale by the positive factor 1/|l_pivot| (a sign flip would invert the
    // inequality); the pivot entry ends up +-1.
    sf.l = scale(1.0 / piv, l);
    sf.l0 = dot(sf.l, x0);
    return sf;
}

DirichletPair dirichlet(const rvec& l, int mu) {
    if (mu < 1) throw DomainViolation("dirichlet: mu must be >= 1");
    const int n = static_cast<int>(l.size());
    long long kmax = 1;
    for (int i = 0; i < n; ++i) kmax *= mu;
    for (long long k = 1; k <= kmax; ++k) {
        DirichletPair pair;
        pair.k = k;
        pair.alpha.resize(l.size());
        bool ok = true;
        for (std::size_t j = 0; j < l.size(); ++j) {
            pair.alpha[j] = std::llround(static_cast<double>(k) * l[j]);
            double err = std::fabs(l[j] - static_cast<double>(pair.alpha[j]) / static_cast<double>(k));
            if (err > 1.0 / (static_cast<double>(mu) * static_cast<double>(k)) + 1e-15) {
                ok = false;
                break;
            }
        }
        if (ok) return pair;
    }
    // Unreachable: the pigeonhole bound guarantees a solution with k <= mu^n.
    throw Error("dirichlet: no approximation found below mu^n");
}

HRep log_hull(const ReinhardtDomain& d) {
    if (d.pieces.size() == 1) return d.pieces.front().hrep();
    std::vector<rvec> verts, rays;
    const int dim = d.dim();
    for (const auto& p : d.pieces) {
        auto v = enumerate_vertices(p.hrep());
        verts.insert(verts.end(), v.begin(), v.end());
        auto r = recession_rays(p.rows(), dim);
        rays.insert(rays.end(), r.begin(), r.end());
    }
    return prune_redundant(hull_hrep(verts, rays, dim));
}

std::vector<rvec> sample_log_points(const LogPolyhedron& p, int count, std::uint64_t seed) {
    return sample_hrep(p.hrep(), count, seed);
}

std::vector<rvec> sample_log_points(const ReinhardtDomain& d, int count, std::uint64_t seed) {
    std::vector<rvec> out;
    const int per = std::max(1, count / static_cast<int>(d.pieces.size()));
    for (std::size_t i = 0; i < d.pieces.size(); ++i) {
        auto s = sample_hrep(d.pieces[i].hrep(), per, seed + i);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

// ---- Laurent construction ------------------------------------------------

namespace {

struct LevelBuild {
    std::vector<long long> e;
    double t0 = 0.0;
    // Top-level trace payload.
    SupportFunctional sf;
    std::optional<LogPolyhedron> face;
    std::vector<rvec> inflation_vectors;
    std::vector<long long> child_e;
    double child_t0 = 0.0;
    double m_used = 0.0;
    DirichletPair pair;
};

struct DirichletPick {
    DirichletPair pair;
    double err_bound = 0.0; // max over samples of |sum x_j (alpha_j - k l_j)|
    bool exact = false;
};

double sample_err(const rvec& lp, const DirichletPair& pr, const std::vector<rvec>& samples_perm) {
    double worst = 0.0;
    for (const rvec& x : samples_perm) {
        double s = 0.0;
        for (std::size_t j = 0; j < lp.size(); ++j)
            s += x[j] * (static_cast<double>(pr.alpha[j]) - static_cast<double>(pr.k) * lp[j]);
        worst = std::max(worst, std::fabs(s));
    }
    return worst;
}

bool pair_exact(const rvec& lp, const DirichletPair& pr) {
    for (std::size_t j = 0; j < lp.size(); ++j)
        if (std::fabs(static_cast<double>(pr.alpha[j]) - static_cast<double>(pr.k) * lp[j]) >
            1e-12 * std::max(1.0, std::fabs(static_cast<double>(pr.k))))
            return false;
    return true;
}

// First k >= k_min whose rounded multiples k*l_j sit within `quality` of
// integers (the Dirichlet inequality with 1/(mu k) replaced by quality/k).
// Keeps the denominator growth tame: requiring the *smallest* Dirichlet
// solution to exceed k_min would leap through continued-fraction
// denominators instead.
DirichletPick scan_pair(const rvec& lp, long long k_min, double quality,
                        const std::vector<rvec>& samples_perm) {
    const long long k_start = std::max(1LL, k_min);
    for (long long k = k_start; k <= k_start + 4000000; ++k) {
        DirichletPair pr;
        pr.k = k;
        pr.alpha.resize(lp.size());
        bool ok = true;
        for (std::size_t j = 0; j < lp.size(); ++j) {
            pr.alpha[j] = std::llround(static_cast<double>(k) * lp[j]);
            if (std::fabs(static_cast<double>(k) * lp[j] -
                          static_cast<double>(pr.alpha[j])) > quality) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        return {pr, sample_err(lp, pr, samples_perm), pair_exact(lp, pr)};
    }
    throw SearchFailure("scan_pair: no admissible Dirichlet-quality pair found");
}

double max_l1_norm(const std::vector<rvec>& samples) {
    double worst = 0.0;
    for (const rvec& x : samples) {
        double s = 0.0;
        for (double v : x) s += std::fabs(v);
        worst = std::max(worst, s);
    }
    return worst;
}

LevelBuild build_functional(const LogPolyhedron& poly, const rvec& x0, double eps, double n_off,
                            double radius, std::uint64_t seed, const ToleranceProfile& tol) {
    const int d = poly.dim();
    LevelBuild out;

    if (d == 1) {
        // Interval base case: a signed integer slope through the endpoint.
        rvec cup{1.0}, cdown{-1.0};
        LpResult up = lp_maximize(poly.rows(), poly.rhs(), cup);
        LpResult down = lp_maximize(poly.rows(), poly.rhs(), cdown);
        double hi = up.value;
        double lo = down.optimal() ? -down.value : hi - 40.0;
        double s;
        if (std::fabs(x0[0] - hi) <= 1e-7)
            s = 1.0;
        else if (down.optimal() && std::fabs(x0[0] - lo) <= 1e-7)
            s = -1.0;
        else
            throw NotExtreme("laurent: interval point is not an endpoint");
        long long k = std::max<long long>(
            1, static_cast<long long>(std::ceil((n_off + 1.0) / std::max(radius, 1e-6))));
        out.e = {static_cast<long long>(s) * k};
        out.t0 = s * static_cast<double>(k) * x0[0];
        return out;
    }

    if (!is_extreme(poly.hrep(), x0, tol))
        throw NotExtreme("laurent: point is not extreme at this level");

    out.sf = support_at(poly.hrep(), x0, tol);
    const rvec lp = apply_perm(out.sf.l, out.sf.perm);
    const double l0 = out.sf.l0;

    // Supporting face -> projection onto the first d-1 permuted coordinates.
    std::vector<rvec> fverts, frays;
    for (const rvec& v : enumerate_vertices(poly.hrep()))
        if (std::fabs(dot(out.sf.l, v) - l0) <= 1e-7) fverts.push_back(drop_last(apply_perm(v, out.sf.perm)));
    for (const rvec& r : recession_rays(poly.rows(), d))
        if (std::fabs(dot(out.sf.l, r)) <= 1e-9) frays.push_back(drop_last(apply_perm(r, out.sf.perm)));
    const rvec x0p = apply_perm(x0, out.sf.perm);
    const rvec x0prime = drop_last(x0p);
    if (fverts.empty()) fverts.push_back(x0prime);

    // Degenerate faces are inflated to full dimension, keeping x0' extreme.
    rmat span;
    for (std::size_t i = 1; i < fverts.size(); ++i) span.push_back(sub(fverts[i], fverts[0]));
    for (const rvec& r : frays) span.push_back(r);
    const int want = d - 1;
    if (matrix_rank(span) < want) {
        Box pbox = bounding_box(poly.hrep());
        double diam = norm2(sub(pbox.hi, pbox.lo));
        double r = 0.01 * std::max(diam, 1e-3);
        rvec h(static_cast<std::size_t>(want), 0.0);
        for (const rvec& v : fverts) {
            rvec dv = sub(v, x0prime);
            double n = norm2(dv);
            if (n > 1e-12) h = add(h, scale(1.0 / n, dv));
        }
        for (const rvec& ray : frays) h = add(h, ray);
        double hn = norm2(h);
        if (hn < 1e-12) {
            // Singleton face: lean toward the parent's interior so the
            // inflated segment sits on the natural side.
            h = sub(drop_last(apply_perm(poly.interior_point(), out.sf.perm)), x0prime);
            hn = norm2(h);
            if (hn < 1e-12) {
                h.assign(static_cast<std::size_t>(want),
                         -1.0 / std::sqrt(static_cast<double>(want)));
                hn = 1.0;
            }
        }
        h = scale(1.0 / hn, h);
        for (int j = 0; j < want; ++j) {
            rvec ej(static_cast<std::size_t>(want), 0.0);
            ej[static_cast<std::size_t>(j)] = 1.0;
            rvec y = add(x0prime, add(scale(r, h), scale(0.1 * r, ej)));
            // h points along G' from x0'; y lands strictly inside the side
            // containing the face, so x0' stays extreme after hulling.
            out.inflation_vectors.push_back(y);
            fverts.push_back(y);
        }
    }

    HRep face_hull = prune_redundant(hull_hrep(fverts, frays, want));
    out.face.emplace(face_hull.a, face_hull.b, tol);
    if (!is_extreme(face_hull, x0prime, tol))
        throw Error("laurent: face inflation lost extremality of x0'");

    double radius_prime =
        radius / std::sqrt(1.0 + dot(drop_last(lp), drop_last(lp))) * 0.999;
    LevelBuild child =
        build_functional(*out.face, x0prime, eps / 2.0, 2.0 * n_off, radius_prime, seed + 1, tol);
    out.child_e = child.e;
    out.child_t0 = child.t0;

    // M-doubling on a deterministic sample of this level's polyhedron.
    auto samples = sample_hrep(poly.hrep(), 2048, seed + 2);
    auto t_of = [&](const rvec& x) {
        rvec xp = apply_perm(x, out.sf.perm);
        double s = -child.t0;
        for (std::size_t j = 0; j + 1 < xp.size(); ++j)
            s += static_cast<double>(child.e[j]) * xp[j];
        return s;
    };
    double m = 1.0;
    bool ok = false;
    while (m <= std::ldexp(1.0, 40)) {
        ok = true;
        for (const rvec& x : samples) {
            double tm = m * (dot(out.sf.l, x) - l0) + t_of(x);
            if (tm > 0.75 * eps) {
                ok = false;
                break;
            }
            if (norm2(sub(x, x0)) >= radius && tm > -(n_off + 1.0)) {
                ok = false;
                break;
            }
        }
        if (ok) break;
        m *= 2.0;
    }
    if (!ok) throw RecursionBudgetExceeded("laurent: M doubling exceeded 2^40");
    out.m_used = m;

    std::vector<rvec> samples_perm;
    samples_perm.reserve(samples.size());
    for (const rvec& x : samples) samples_perm.push_back(apply_perm(x, out.sf.perm));
    const double err_cap = std::min(eps / 4.0, 1.0);
    const double quality = err_cap / std::max(max_l1_norm(samples_perm), 1e-9);
    DirichletPick pick = scan_pair(lp, static_cast<long long>(m), quality, samples_perm);
    out.pair = pick.pair;

    std::vector<long long> e_perm(child.e);
    e_perm.push_back(0);
    for (std::size_t j = 0; j < e_perm.size(); ++j) e_perm[j] += pick.pair.alpha[j];
    out.e = undo_perm(e_perm, out.sf.perm);
    out.t0 = l0 * static_cast<double>(pick.pair.k) + child.t0;
    return out;
}

} // namespace

LaurentResult laurent_peak(const ReinhardtDomain& d, const cvec& z0, int mu, double n_target,
                           double u_radius, const ToleranceProfile& tol) {
    if (mu < 1) throw DomainViolation("laurent_peak: mu must be >= 1");
    const int n = d.dim();
    if (n > 3) throw ScopeViolation("laurent_peak: desk-scale recursion bound is n <= 3");
    const rvec x0 = log_map(z0);
    HRep hull = log_hull(d);
    if (!is_extreme(hull, x0, tol))
        throw NotExtreme("laurent_peak: log z0 is not extreme in the closed hull of log D");

    const double eps = 0.5;
    const std::uint64_t seed = 0xA11CEULL;
    auto samples = sample_log_points(d, 4096, seed);

    // mu-independent core: support data, recursive integer functional, M.
    LevelBuild core;
    SupportFunctional sf;
    rvec lp;
    double l0 = 0.0;
    double m_used = 1.0;
    std::vector<rvec> samples_perm;
    double eta = 1e300;
    int off_count = 0;

    if (n == 1) {
        core = build_functional(d.pieces.front(), x0, eps, n_target + 1.0, u_radius, seed, tol);
        // Present the 1-D case in the same shape: L = sign(e), l0 = L x0,
        // and let the base-case slope act as the k floor.
        sf.l = {core.e[0] >= 0 ? 1.0 : -1.0};
        sf.l0 = sf.l[0] * x0[0];
        sf.perm = {0};
        lp = sf.l;
        l0 = sf.l0;
        m_used = static_cast<double>(std::llabs(core.e[0]));
        core.child_e.clear();
        core.child_t0 = 0.0;
        for (const rvec& x : samples) samples_perm.push_back(x);
    } else {
        LogPolyhedron hull_poly(hull.a, hull.b, tol);
        core = build_functional(hull_poly, x0, eps, n_target + 1.0, u_radius, seed, tol);
        sf = core.sf;
        lp = apply_perm(sf.l, sf.perm);
        l0 = sf.l0;
        m_used = core.m_used;
        for (const rvec& x : samples) samples_perm.push_back(apply_perm(x, sf.perm));
    }

    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (norm2(sub(samples[i], x0)) >= u_radius) {
            ++off_count;
            eta = std::min(eta, l0 - dot(sf.l, samples[i]));
        }
    }
    if (off_count == 0) eta = 1e300;

    // Re-check the M conditions against the union samples (the core ran on
    // the hull at n >= 2; the postconditions quantify over log D itself).
    auto t_of_perm = [&](const rvec& xp) {
        double s = -core.child_t0;
        for (std::size_t j = 0; j < core.child_e.size(); ++j)
            s += static_cast<double>(core.child_e[j]) * xp[j];
        return s;
    };
    if (n >= 2) {
        bool ok = false;
        while (m_used <= std::ldexp(1.0, 40)) {
            ok = true;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                double tm = m_used * (dot(sf.l, samples[i]) - l0) + t_of_perm(samples_perm[i]);
                if (tm > 0.75 * eps ||
                    (norm2(sub(samples[i], x0)) >= u_radius && tm > -(n_target + 2.0))) {
                    ok = false;
                    break;
                }
            }
            if (ok) break;
            m_used *= 2.0;
        }
        if (!ok) throw RecursionBudgetExceeded("laurent_peak: M doubling exceeded 2^40");
    }

    // Per-mu chain: only the Dirichlet pair moves. k never decreases, and it
    // grows fast enough that the face term dominates the approximation
    // wiggle pointwise on every off-U sample, so the off-U sup is monotone.
    const double err_cap = std::min(eps / 4.0, 1.0);
    const double x1max = std::max(max_l1_norm(samples_perm), 1e-9);
    long long prev_k = 0;
    double prev_err = 0.0;
    DirichletPick pick;
    for (int i = 1; i <= mu; ++i) {
        const double quality = std::min(1.0 / i, err_cap / x1max);
        long long k_min = std::max(static_cast<long long>(m_used), 1LL);
        if (prev_k > 0) {
            long long growth = prev_k + 1;
            if (eta < 1e200 && eta > 1e-9)
                growth = prev_k + 1 +
                         static_cast<long long>(
                             std::ceil(2.0 * (prev_err + x1max * quality) / eta));
            k_min = std::max(k_min, growth);
        }
        pick = scan_pair(lp, k_min, quality, samples_perm);
        prev_k = pick.pair.k;
        prev_err = pick.err_bound;
    }

    std::vector<long long> e_perm(core.child_e);
    e_perm.push_back(0);
    for (std::size_t j = 0; j < e_perm.size(); ++j) e_perm[j] += pick.pair.alpha[j];

    LaurentResult res;
    res.monomial.exponent = undo_perm(e_perm, sf.perm);
    double t0_child = core.child_t0;
    double theta = 0.0;
    for (std::size_t j = 0; j < z0.size(); ++j)
        theta -= static_cast<double>(res.monomial.exponent[j]) * std::arg(z0[j]);
    double log_mag = -l0 * static_cast<double>(pick.pair.k) - t0_child;
    res.monomial.coeff = std::polar(std::exp(log_mag), theta);

    res.trace.level = n;
    res.trace.l = sf.l;
    res.trace.l0 = l0;
    res.trace.perm = sf.perm;
    res.trace.face_projection = core.face;
    res.trace.inflation_vectors = core.inflation_vectors;
    res.trace.t_prime = core.child_e;
    res.trace.t0 = t0_child;
    res.trace.m_used = m_used;
    res.trace.alpha = pick.pair.alpha;
    res.trace.k = pick.pair.k;
    res.trace.theta = theta;
    res.trace.epsilon = eps;
    res.trace.n_target = n_target;
    res.trace.u_radius = u_radius;
    res.trace.sample_seed = seed;

    // Verified postconditions, never assumed.
    double at_z0 = std::abs(res.monomial.evaluate(z0));
    if (at_z0 < std::exp(-eps) - 1e-12)
        throw Error("laurent_peak: value at z0 fell below e^{-eps}");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double lm = res.monomial.log_modulus(samples[i]);
        if (lm > eps + 1e-9) throw Error("laurent_peak: sampled sup exceeded e^{eps}");
        if (norm2(sub(samples[i], x0)) >= u_radius && lm > -n_target + 1e-9)
            throw Error("laurent_peak: sampled sup off U exceeded e^{-N}");
    }
    return res;
}

json ConstructionTrace::to_json() const {
    json j{{"level", level},
           {"l", l},
           {"l0", l0},
           {"perm", perm},
           {"t_prime", t_prime},
           {"t0", t0},
           {"M", m_used},
           {"dirichlet", {{"alpha", alpha}, {"k", k}}},
           {"theta", theta},
           {"epsilon", epsilon},
           {"N", n_target},
           {"U_radius", u_radius},
           {"sample_seed", sample_seed}};
    if (face_projection) j["face_projection"] = face_projection->to_json();
    json infl = json::array();
    for (const rvec& y : inflation_vectors) infl.push_back(y);
    j["inflation_vectors"] = infl;
    return j;
}

// ---- classify_peak --------------------------------------------------------

namespace {

// sup over the last listed variable coordinate, with the fixed moduli
// substituted and the other variable coordinates clipped at <= -40 (the
// desk-scale stand-in for "arbitrarily close to the axis"). clip_all also
// clips the maximized coordinate, turning the call into a pure closure
// feasibility probe. nullopt when the slice misses the log model entirely.
std::optional<double> slice_sup_last(const ReinhardtDomain& d, const rvec& x_fixed_prefix,
                                     const std::vector<int>& zero_coords, bool clip_all) {
    const int n = d.dim();
    double best = -1e300;
    bool any = false;
    for (const auto& piece : d.pieces) {
        std::vector<int> vars = zero_coords;
        rmat a2;
        rvec b2;
        for (std::size_t r = 0; r < piece.rows().size(); ++r) {
            rvec row;
            double rhs = piece.rhs()[r];
            std::size_t fixed_idx = 0;
            for (int j = 0; j < n; ++j) {
                bool is_var = std::find(vars.begin(), vars.end(), j) != vars.end();
                if (is_var) continue;
                rhs -= piece.rows()[r][static_cast<std::size_t>(j)] * x_fixed_prefix[fixed_idx];
                ++fixed_idx;
            }
            for (int v : vars) row.push_back(piece.rows()[r][static_cast<std::size_t>(v)]);
            a2.push_back(row);
            b2.push_back(rhs);
        }
        const std::size_t clip_until = clip_all ? vars.size() : vars.size() - 1;
        for (std::size_t v = 0; v < clip_until; ++v) {
            rvec row(vars.size(), 0.0);
            row[v] = 1.0;
            a2.push_back(row);
            b2.push_back(-40.0);
        }
        rvec c(vars.size(), 0.0);
        c.back() = 1.0;
        LpResult r = lp_maximize(a2, b2, c);
        if (r.optimal()) {
            any = true;
            best = std::max(best, r.value);
        } else if (r.unbounded()) {
            any = true;
            best = std::max(best, 1e300);
        }
    }
    if (!any) return std::nullopt;
    return best;
}

ReinhardtDomain project_domain(const ReinhardtDomain& d, const ToleranceProfile& tol) {
    std::vector<LogPolyhedron> pieces;
    for (const auto& p : d.pieces) {
        HRep dropped = fourier_motzkin_drop_last(p.hrep());
        pieces.emplace_back(dropped.a, dropped.b, tol);
    }
    std::vector<bool> axes(d.meets_axes.begin(), d.meets_axes.end() - 1);
    return ReinhardtDomain(std::move(pieces), std::move(axes), tol);
}

} // namespace

PeakVerdict classify_peak(const ReinhardtDomain& d, const cvec& z, const ToleranceProfile& tol) {
    const int n = d.dim();
    if (static_cast<int>(z.size()) != n) throw DomainViolation("classify_peak: dimension mismatch");

    std::vector<int> zero_coords;
    for (int j = 0; j < n; ++j)
        if (z[static_cast<std::size_t>(j)] == cplx(0.0)) zero_coords.push_back(j);

    if (zero_coords.empty()) {
        HRep hull = log_hull(d);
        // Pseudoconvexity hypothesis: the union must be log-convex.
        for (const rvec& x : sample_hrep(hull, 512, 0xC0FFEE)) {
            double best = 1e300;
            for (const auto& p : d.pieces) best = std::min(best, p.max_violation(x));
            if (best > 1e-6)
                throw DomainViolation("classify_peak: union of pieces is not log-convex");
        }
        rvec x = log_map(z);
        double viol = 1e300;
        for (const auto& p : d.pieces) viol = std::min(viol, p.max_violation(x));
        if (viol > 1e-7) throw NotInClosure("classify_peak: point is outside the closure");
        return is_extreme(hull, x, tol) ? PeakVerdict::Peak : PeakVerdict::NotPeak;
    }

    // Axis cases. Extract the fixed (nonzero) moduli in coordinate order.
    rvec fixed;
    for (int j = 0; j < n; ++j)
        if (std::find(zero_coords.begin(), zero_coords.end(), j) == zero_coords.end())
            fixed.push_back(std::log(std::abs(z[static_cast<std::size_t>(j)])));

    // Closure membership: the log model must admit points with the fixed
    // moduli and arbitrarily deep zero coordinates.
    {
        std::optional<double> probe = slice_sup_last(d, fixed, zero_coords, true);
        if (!probe) throw NotInClosure("classify_peak: axis point is outside the closure");
    }
    if (static_cast<int>(zero_coords.size()) == n) return PeakVerdict::NotPeak; // the origin

    // Peel the last vanishing coordinate (permutation): the slice condition
    // demands that the closure slice over z' degenerates to the point itself.
    int peel = zero_coords.back();
    std::optional<double> sup = slice_sup_last(d, fixed, zero_coords, false);
    if (sup && *sup > -39.0) return PeakVerdict::NotPeak; // slice holds off-axis points

    // Recurse on the projected domain with the peeled coordinate removed.
    ReinhardtDomain base = d;
    if (peel != n - 1) {
        // Swap coordinate `peel` to the back in every piece.
        std::vector<LogPolyhedron> swapped;
        for (const auto& p : d.pieces) {
            rmat a = p.rows();
            for (rvec& row : a) std::swap(row[static_cast<std::size_t>(peel)], row.back());
            swapped.emplace_back(a, p.rhs(), tol);
        }
        std::vector<bool> axes = d.meets_axes;
        std::swap(axes[static_cast<std::size_t>(peel)], axes.back());
        base = ReinhardtDomain(std::move(swapped), std::move(axes), tol);
    }
    ReinhardtDomain proj = project_domain(base, tol);
    cvec zp;
    for (int j = 0; j < n; ++j)
        if (j != peel) zp.push_back(z[static_cast<std::size_t>(j)]);
    return classify_peak(proj, zp, tol);
}

// ---- decompose ------------------------------------------------------------

namespace {

// Largest t >= 0 with x + t d inside the polyhedron; +inf when unblocked.
double march(const HRep& p, const rvec& x, const rvec& dir) {
    double best = 1e300;
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        double ad = dot(p.a[i], dir);
        if (ad > 1e-12) {
            double slack = p.b[i] - dot(p.a[i], x);
            best = std::min(best, std::max(0.0, slack / ad));
        }
    }
    return best;
}

struct DecompAccum {
    std::vector<rvec> verts;
    rvec weights;
    rvec alpha_total;
};

void decomp_rec(const HRep& p, const rvec& x, double weight, DecompAccum& acc,
                const ToleranceProfile& tol, int depth) {
    if (depth > 16) throw Error("decompose: recursion depth exceeded");
    rmat active;
    for (std::size_t i = 0; i < p.a.size(); ++i)
        if (std::fabs(dot(p.a[i], x) - p.b[i]) <= 1e-8) active.push_back(p.a[i]);
    const int n = p.dim();
    if (!active.empty() && matrix_rank(active) == n) {
        for (std::size_t i = 0; i < acc.verts.size(); ++i)
            if (hull_detail::near(acc.verts[i], x, 1e-7)) {
                acc.weights[i] += weight;
                return;
            }
        acc.verts.push_back(x);
        acc.weights.push_back(weight);
        return;
    }
    std::vector<rvec> dirs = active.empty()
                                 ? std::vector<rvec>{}
                                 : null_space(active);
    rvec dir;
    if (active.empty()) {
        dir.assign(static_cast<std::size_t>(n), 0.0);
        dir[0] = 1.0;
    } else {
        if (dirs.empty()) throw Error("decompose: no chord direction at non-extreme point");
        dir = dirs.front();
    }
    double tp = march(p, x, dir);
    double tm = march(p, x, scale(-1.0, dir));
    if (tp >= 1e299 && tm >= 1e299)
        throw Error("decompose: polyhedron contains a line");
    if (tp >= 1e299) {
        // +dir is a recession direction of the current face; step back along
        // it to the boundary and bank the recession part.
        rvec y = add(x, scale(-tm, dir));
        acc.alpha_total = add(acc.alpha_total, scale(weight * tm, dir));
        decomp_rec(p, y, weight, acc, tol, depth + 1);
        return;
    }
    if (tm >= 1e299) {
        rvec y = add(x, scale(tp, dir));
        acc.alpha_total = add(acc.alpha_total, scale(-weight * tp, dir));
        decomp_rec(p, y, weight, acc, tol, depth + 1);
        return;
    }
    rvec yp = add(x, scale(tp, dir));
    rvec ym = add(x, scale(-tm, dir));
    if (tp + tm <= 1e-12) throw Error("decompose: degenerate chord");
    decomp_rec(p, yp, weight * tm / (tp + tm), acc, tol, depth + 1);
    decomp_rec(p, ym, weight * tp / (tp + tm), acc, tol, depth + 1);
}

} // namespace

Decomposition decompose(const HRep& p, const rvec& x0, const ToleranceProfile& tol) {
    for (std::size_t i = 0; i < p.a.size(); ++i)
        if (dot(p.a[i], x0) > p.b[i] + 1e-8) throw NotInSet("decompose: point is outside");
    DecompAccum acc;
    acc.alpha_total.assign(x0.size(), 0.0);
    decomp_rec(p, x0, 1.0, acc, tol, 0);
    Decomposition dec;
    dec.vertices = acc.verts;
    dec.weights = acc.weights;
    double t0 = norm2(acc.alpha_total);
    dec.t0 = t0;
    dec.alpha = t0 > 1e-12 ? scale(1.0 / t0, acc.alpha_total)
                           : rvec(x0.size(), 0.0);
    return dec;
}

// ---- envelope ---------------------------------------------------------------

ReinhardtDomain envelope(const ReinhardtDomain& d, const ToleranceProfile& tol) {
    const int n = d.dim();
    if (n > 3) throw ScopeViolation("envelope: n <= 3 only");
    for (bool m : d.meets_axes)
        if (m) throw ScopeViolation("envelope: domains meeting coordinate axes are out of scope");
    std::vector<rvec> verts, rays;
    for (const auto& p : d.pieces) {
        auto v = enumerate_vertices(p.hrep());
        verts.insert(verts.end(), v.begin(), v.end());
        auto r = recession_rays(p.rows(), n);
        if (n == 3 && !r.empty())
            throw ScopeViolation("envelope: unbounded 3-D pieces are out of scope");
        rays.insert(rays.end(), r.begin(), r.end());
    }
    HRep hull = prune_redundant(hull_hrep(verts, rays, n));
    std::vector<LogPolyhedron> piece{LogPolyhedron(hull.a, hull.b, tol)};
    return ReinhardtDomain(std::move(piece), std::vector<bool>(static_cast<std::size_t>(n), false),
                           tol);
}

// ---- Example 6.1 -----------------------------------------------------------

LogPolyhedron example61_step(int n, const ToleranceProfile& tol) {
    if (n < 1) throw DomainViolation("example61_step: n >= 1");
    double left = -static_cast<double>(n) * n;
    double right = -static_cast<double>(n - 1) * (n - 1);
    double depth = -static_cast<double>(n) * n - n;
    rmat a{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
    rvec b{right, -left, depth, 1e4};
    return LogPolyhedron(a, b, tol);
}

ReinhardtDomain example61_domain(int k_steps, const ToleranceProfile& tol) {
    if (k_steps < 1) throw DomainViolation("example61_domain: K >= 1");
    // Slab model of the staircase: S_m = {-m^2 <= x <= 1, y <= -m^2 - m}
    // reproduces y < -n^2-n on x in (-n^2, -(n-1)^2]; the final slab at step
    // K+1's level is the finite floor cut.
    std::vector<LogPolyhedron> pieces;
    const double floor_y = -(static_cast<double>(k_steps + 1) * (k_steps + 1) +
                             (k_steps + 1) + 1.0);
    auto slab = [&](double xmin, double ytop) {
        rmat a{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
        rvec b{1.0, -xmin, ytop, -floor_y};
        return LogPolyhedron(a, b, tol);
    };
    pieces.push_back(slab(0.0, 0.0));
    for (int m = 1; m <= k_steps + 1; ++m)
        pieces.push_back(slab(-static_cast<double>(m) * m,
                              -static_cast<double>(m) * m - m));
    return ReinhardtDomain(std::move(pieces), {false, false}, tol);
}

ExtensionReport extension_probe(const ReinhardtDomain& dk, const LaurentMonomial& f, int k_steps,
                                const ToleranceProfile& tol) {
    if (f.exponent != std::vector<long long>{-1, 1})
        throw DomainViolation("extension_probe: probe function must be w/z");
    ExtensionReport rep;
    rep.k_steps = k_steps;

    auto samples = sample_log_points(dk, 20000, 0xE61);
    const double shell_x = -static_cast<double>(k_steps - 1) * (k_steps - 1);

    rep.step_sampled_sup.assign(static_cast<std::size_t>(k_steps), 0.0);
    rep.step_lp_sup.assign(static_cast<std::size_t>(k_steps), 0.0);
    rep.dk_shell_sampled_sup = 0.0;
    for (const rvec& x : samples) {
        double v = std::exp(f.log_modulus(x));
        for (int n = 1; n <= k_steps; ++n) {
            double lo = -static_cast<double>(n) * n;
            double hi = -static_cast<double>(n - 1) * (n - 1);
            if (x[0] > lo && x[0] <= hi)
                rep.step_sampled_sup[static_cast<std::size_t>(n - 1)] =
                    std::max(rep.step_sampled_sup[static_cast<std::size_t>(n - 1)], v);
        }
        if (x[0] <= shell_x) rep.dk_shell_sampled_sup = std::max(rep.dk_shell_sampled_sup, v);
    }

    // LP oracle per closed step: max (y - x) over the step's H-rep.
    for (int n = 1; n <= k_steps; ++n) {
        LogPolyhedron step = example61_step(n, tol);
        LpResult r = lp_maximize(step.rows(), step.rhs(), {-1.0, 1.0});
        rep.step_lp_sup[static_cast<std::size_t>(n - 1)] = r.optimal() ? std::exp(r.value) : 0.0;
    }

    ReinhardtDomain hull = envelope(dk, tol);
    {
        rmat a = hull.pieces.front().rows();
        rvec b = hull.pieces.front().rhs();
        a.push_back({1.0, 0.0});
        b.push_back(shell_x);
        LpResult r = lp_maximize(a, b, {-1.0, 1.0});
        rep.hull_shell_lp_sup = r.optimal() ? std::exp(r.value) : 0.0;
        HRep shell{a, b};
        for (const rvec& x : sample_hrep(shell, 4000, 0xE62))
            rep.hull_shell_sampled_sup =
                std::max(rep.hull_shell_sampled_sup, std::exp(f.log_modulus(x)));
    }
    return rep;
}

json ExtensionReport::to_json() const {
    return json{{"K", k_steps},
                {"step_sampled_sup", step_sampled_sup},
                {"step_lp_sup", step_lp_sup},
                {"dk_shell_sampled_sup", dk_shell_sampled_sup},
                {"hull_shell_sampled_sup", hull_shell_sampled_sup},
                {"hull_shell_lp_sup", hull_shell_lp_sup}};
}

// ---- catalogs ----------------------------------------------------------------

ReinhardtDomain log_square_domain() {
    rmat a{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
    rvec b{0.0, 1.0, 0.0, 1.0};
    std::vector<LogPolyhedron> pieces{LogPolyhedron(a, b)};
    return ReinhardtDomain(std::move(pieces), {false, false});
}

ReinhardtDomain irrational_slice_domain() {
    rmat a{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}, {1.0, std::sqrt(2.0)}};
    rvec b{0.0, 5.0, 0.0, 5.0, 0.0};
    std::vector<LogPolyhedron> pieces{LogPolyhedron(a, b)};
    return ReinhardtDomain(std::move(pieces), {false, false});
}

ReinhardtDomain annulus_domain(double lo, double hi) {
    rmat a{{1.0}, {-1.0}};
    rvec b{hi, -lo};
    std::vector<LogPolyhedron> pieces{LogPolyhedron(a, b)};
    return ReinhardtDomain(std::move(pieces), {false});
}

ReinhardtDomain bidisc_domain() {
    rmat a{{1.0, 0.0}, {0.0, 1.0}};
    rvec b{0.0, 0.0};
    std::vector<LogPolyhedron> pieces{LogPolyhedron(a, b)};
    return ReinhardtDomain(std::move(pieces), {true, true});
}

} // namespace peaklab::reinhardt
