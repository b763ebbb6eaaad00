#include "peaklab/cconvex.hpp"

#include <cmath>

#include "peaklab/rng.hpp"
#include "peaklab/simplex.hpp"

namespace peaklab::cconvex {

using nlohmann::json;

ConvexBody::ConvexBody(rmat rows, rvec rhs, int complex_dim, const ToleranceProfile& tol)
    : n_(complex_dim) {
    tol.validate();
    if (n_ < 1) throw DomainViolation("ConvexBody: complex dimension must be >= 1");
    const std::size_t d = static_cast<std::size_t>(2 * n_);
    if (rows.empty() || rows.size() != rhs.size())
        throw DomainViolation("ConvexBody: rows/rhs mismatch or empty");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) throw DomainViolation("ConvexBody: row dimension mismatch");
        double n = norm2(rows[i]);
        if (n < 1e-14) throw DomainViolation("ConvexBody: zero row");
        rep_.a.push_back(scale(1.0 / n, rows[i]));
        rep_.b.push_back(rhs[i] / n);
    }

    // Chebyshev center as the interior certificate (bounded body, so the
    // uncapped LP is bounded and the center scales exactly with the body).
    {
        rmat a2;
        rvec b2, c(d + 1, 0.0);
        for (std::size_t i = 0; i < rep_.a.size(); ++i) {
            rvec row = rep_.a[i];
            row.push_back(1.0);
            a2.push_back(row);
            b2.push_back(rep_.b[i]);
        }
        c.back() = 1.0;
        LpResult r = lp_maximize(a2, b2, c);
        if (!r.optimal() || r.value <= tol.lp_feas_tol)
            throw DomainViolation("ConvexBody: empty interior");
        interior_.assign(r.x.begin(), r.x.end() - 1);
    }
    // Boundedness in every real coordinate.
    for (std::size_t j = 0; j < d; ++j) {
        for (double sign : {1.0, -1.0}) {
            rvec c(d, 0.0);
            c[j] = sign;
            if (!lp_maximize(rep_.a, rep_.b, c).optimal())
                throw DomainViolation("ConvexBody: domain is unbounded");
        }
    }
}

rvec ConvexBody::to_real(const cvec& z) {
    rvec x(2 * z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        x[2 * j] = z[j].real();
        x[2 * j + 1] = z[j].imag();
    }
    return x;
}

cvec ConvexBody::to_complex(const rvec& x) {
    cvec z(x.size() / 2);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
    return z;
}

double ConvexBody::max_violation(const cvec& z) const {
    rvec x = to_real(z);
    double v = -1e300;
    for (std::size_t i = 0; i < rep_.a.size(); ++i) v = std::max(v, dot(rep_.a[i], x) - rep_.b[i]);
    return v;
}

bool ConvexBody::contains(const cvec& z, double slack) const { return max_violation(z) <= slack; }

std::vector<cvec> ConvexBody::sample_interior(int count, std::uint64_t seed) const {
    const std::size_t d = static_cast<std::size_t>(2 * n_);
    rvec lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
        rvec c(d, 0.0);
        c[j] = 1.0;
        hi[j] = lp_maximize(rep_.a, rep_.b, c).value;
        c[j] = -1.0;
        lo[j] = -lp_maximize(rep_.a, rep_.b, c).value;
    }
    DetRng rng(seed);
    std::vector<cvec> out;
    long long tries = 0, cap = 4000LL * count + 200000;
    while (static_cast<int>(out.size()) < count) {
        if (++tries > cap) throw Error("ConvexBody: interior sampling stalled");
        rvec x(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = rng.uniform(lo[j], hi[j]);
        bool ok = true;
        for (std::size_t i = 0; i < rep_.a.size() && ok; ++i)
            ok = dot(rep_.a[i], x) < rep_.b[i] - 1e-12;
        if (ok) out.push_back(to_complex(x));
    }
    return out;
}

std::vector<cvec> ConvexBody::sample_boundary(int count, std::uint64_t seed) const {
    const std::size_t d = static_cast<std::size_t>(2 * n_);
    DetRng rng(seed);
    std::vector<cvec> out;
    while (static_cast<int>(out.size()) < count) {
        rvec dir(d);
        double n = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            dir[j] = rng.uniform(-1.0, 1.0);
            n += dir[j] * dir[j];
        }
        if (n < 1e-12) continue;
        dir = scale(1.0 / std::sqrt(n), dir);
        double t = 1e300;
        for (std::size_t i = 0; i < rep_.a.size(); ++i) {
            double ad = dot(rep_.a[i], dir);
            if (ad > 1e-12)
                t = std::min(t, (rep_.b[i] - dot(rep_.a[i], interior_)) / ad);
        }
        if (t >= 1e299) continue;
        out.push_back(to_complex(axpy(t, dir, interior_)));
    }
    return out;
}

json ConvexBody::to_json() const {
    json rows = json::array();
    for (std::size_t i = 0; i < rep_.a.size(); ++i)
        rows.push_back(json{{"nu", rep_.a[i]}, {"c", rep_.b[i]}});
    return json{{"type", "convex"}, {"rows", rows}, {"complex_dim", n_}};
}

ConvexBody ConvexBody::from_json(const json& j, const ToleranceProfile& tol) {
    rmat a;
    rvec b;
    for (const auto& row : j.at("rows")) {
        a.push_back(row.at("nu").get<rvec>());
        b.push_back(row.at("c").get<double>());
    }
    return ConvexBody(std::move(a), std::move(b), j.at("complex_dim").get<int>(), tol);
}

cvec support_complex(const ConvexBody& b, const cvec& a, const ToleranceProfile& tol) {
    rvec ar = ConvexBody::to_real(a);
    const auto& rep = b.hrep();
    rvec nu_r(ar.size(), 0.0);
    int active = 0;
    for (std::size_t i = 0; i < rep.a.size(); ++i) {
        double slack = rep.b[i] - dot(rep.a[i], ar);
        if (slack < -1e-7) throw NotOnBoundary("support_complex: point is outside the body");
        if (std::fabs(slack) <= std::max(tol.lp_feas_tol, 1e-9)) {
            nu_r = add(nu_r, rep.a[i]);
            ++active;
        }
    }
    if (active == 0) throw NotOnBoundary("support_complex: point is not on the boundary");
    nu_r = scale(1.0 / active, nu_r);
    cvec nu(static_cast<std::size_t>(b.complex_dim()));
    for (std::size_t j = 0; j < nu.size(); ++j) nu[j] = cplx(nu_r[2 * j], nu_r[2 * j + 1]);
    return nu;
}

WeakPeak weak_peak(const ConvexBody& b, const cvec& a, const ToleranceProfile& tol) {
    WeakPeak wp;
    wp.nu = support_complex(b, a, tol);
    auto pairing = HoloFunction::affine_pairing(wp.nu, a);

    // Diameter of the planar image w(D), from boundary ray-shooting samples,
    // inflated by 1%: a larger d keeps |w/d| <= 1 and Re(w) < 0 intact.
    auto boundary = b.sample_boundary(512, 0x5EED);
    std::vector<cplx> image;
    image.reserve(boundary.size() + 1);
    for (const cvec& z : boundary) image.push_back(pairing->evaluate(z, tol));
    image.push_back(cplx(0.0)); // w(a) = 0 is in the closed image
    double diam = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i)
        for (std::size_t j = i + 1; j < image.size(); ++j)
            diam = std::max(diam, std::abs(image[i] - image[j]));
    if (diam <= 0.0) throw Error("weak_peak: degenerate projected image");
    wp.diameter = 1.01 * diam;
    wp.phi = HoloFunction::exp_inv_log(pairing, wp.diameter);
    return wp;
}

ConvexBody box_polydisc(int n) {
    rmat a;
    rvec b;
    for (int j = 0; j < 2 * n; ++j) {
        rvec row(static_cast<std::size_t>(2 * n), 0.0);
        row[static_cast<std::size_t>(j)] = 1.0;
        a.push_back(row);
        b.push_back(1.0);
        row[static_cast<std::size_t>(j)] = -1.0;
        a.push_back(row);
        b.push_back(1.0);
    }
    return ConvexBody(std::move(a), std::move(b), n);
}

ConvexBody disc_polygon(int sides) {
    rmat a;
    rvec b;
    for (int k = 0; k < sides; ++k) {
        double th = 2.0 * M_PI * k / sides;
        a.push_back({std::cos(th), std::sin(th)});
        b.push_back(1.0);
    }
    return ConvexBody(std::move(a), std::move(b), 1);
}

ConvexBody ball_approx(int n, int rows, std::uint64_t seed) {
    DetRng rng(seed);
    rmat a;
    rvec b;
    // Tangent rings in each complex coordinate plane (these pin the planar
    // shadows |z_j| <= ~1, including the cut through a = (1, 0, ..., 0)),
    // plus random tangent cuts for roundness across planes.
    const int ring = 32;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < ring; ++k) {
            double th = 2.0 * M_PI * k / ring;
            rvec row(static_cast<std::size_t>(2 * n), 0.0);
            row[static_cast<std::size_t>(2 * j)] = std::cos(th);
            row[static_cast<std::size_t>(2 * j + 1)] = std::sin(th);
            a.push_back(row);
            b.push_back(1.0);
        }
    while (static_cast<int>(a.size()) < rows) {
        rvec u(static_cast<std::size_t>(2 * n));
        double s = 0.0;
        for (auto& v : u) {
            v = rng.uniform(-1.0, 1.0);
            s += v * v;
        }
        if (s < 1e-6 || s > 1.0) continue;
        a.push_back(scale(1.0 / std::sqrt(s), u));
        b.push_back(1.0);
    }
    return ConvexBody(std::move(a), std::move(b), n);
}

} // namespace peaklab::cconvex
