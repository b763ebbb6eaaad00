#include "peaklab/sympoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "peaklab/mobius.hpp"

namespace peaklab::sympoly {

namespace {

constexpr double kAngleOffset = 0.5; // keeps rational angles (e.g. pi) off the grid

Membership band_verdict(double measure, double band) {
    if (measure < 1.0 - band) return Membership::Interior;
    if (std::fabs(measure - 1.0) <= band) return Membership::Boundary;
    return Membership::Exterior;
}

// Deterministic golden-section maximization on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, int iters, double& best_x) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    if (f1 >= f2) {
        best_x = x1;
        return f1;
    }
    best_x = x2;
    return f2;
}

struct MeasureResult {
    double value = 0.0;
    bool pole = false;
};

// Recursive Costara measure: max over the lambda grid of the measure of
// z~(lambda), |.| at dimension one. Values near 1 get a golden-section
// refinement pass on the most promising angles; clear-cut values do not
// need it. `bail_above` short-circuits far-exterior scans.
MeasureResult costara_measure(const cvec& z, int grid, const ToleranceProfile& tol,
                              double bail_above) {
    const int n = static_cast<int>(z.size());
    if (n == 1) return {std::abs(z[0]), false};

    MeasureResult res;
    struct Candidate {
        double value;
        double angle;
        double radius;
    };
    std::vector<Candidate> top;

    auto eval_lambda = [&](cplx lambda) -> double {
        cvec mapped;
        try {
            mapped = frac_map({n, lambda}, z, tol);
        } catch (const PoleHit&) {
            res.pole = true;
            return std::numeric_limits<double>::infinity();
        }
        MeasureResult inner = costara_measure(mapped, grid, tol, bail_above);
        res.pole = res.pole || inner.pole;
        return inner.value;
    };

    auto consider = [&](double value, double angle, double radius) {
        res.value = std::max(res.value, value);
        top.push_back({value, angle, radius});
        std::sort(top.begin(), top.end(),
                  [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
        if (top.size() > 3) top.pop_back();
    };

    // Unit circle carries half the budget: the measure is a max of moduli of
    // analytic branches of lambda, so its sup over the closed disc sits on
    // the circle.
    const int circle_pts = std::max(8, grid / 2);
    const double circle_step = 2.0 * M_PI / circle_pts;
    for (int k = 0; k < circle_pts; ++k) {
        double theta = circle_step * k + kAngleOffset;
        consider(eval_lambda(cplx(std::cos(theta), std::sin(theta))), theta, 1.0);
        if (res.value > bail_above) return res;
    }
    int remaining = grid - circle_pts - 1;
    consider(eval_lambda(cplx(0.0)), 0.0, 0.0);
    const int rings = std::max(1, static_cast<int>(std::sqrt(remaining / 6.0)));
    const int per_ring = std::max(4, remaining / rings);
    for (int i = 1; i <= rings; ++i) {
        double r = static_cast<double>(i) / (rings + 1);
        for (int k = 0; k < per_ring; ++k) {
            double theta = 2.0 * M_PI * k / per_ring + kAngleOffset + 0.37 * i;
            consider(eval_lambda(r * cplx(std::cos(theta), std::sin(theta))), theta, r);
            if (res.value > bail_above) return res;
        }
    }

    if (std::fabs(res.value - 1.0) < 3e-2) {
        for (const Candidate& c : top) {
            if (c.radius == 0.0) continue;
            double step = (c.radius == 1.0) ? circle_step : 2.0 * M_PI / per_ring;
            double best_theta;
            double refined = golden_max(
                [&](double th) {
                    return eval_lambda(c.radius * cplx(std::cos(th), std::sin(th)));
                },
                c.angle - step, c.angle + step, 60, best_theta);
            res.value = std::max(res.value, refined);
        }
    }
    return res;
}

double max_root_modulus_of(const cvec& roots_vec) {
    double m = 0.0;
    for (const cplx& r : roots_vec) m = std::max(m, std::abs(r));
    return m;
}

} // namespace

cvec sym(const cvec& lambda) { return elementary_symmetric(lambda); }

ComplexPoly char_poly(const cvec& z) {
    const std::size_t n = z.size();
    if (n == 0) throw DomainViolation("char_poly: empty point");
    cvec c(n, cplx(0.0));
    double sign = -1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        c[n - k] = sign * z[k - 1];
        sign = -sign;
    }
    return ComplexPoly(std::move(c));
}

MembershipClass classify(const cvec& z, const ToleranceProfile& tol) {
    MembershipClass mc;
    mc.witness_roots = roots(char_poly(z), tol);
    mc.max_root_modulus = max_root_modulus_of(mc.witness_roots);
    mc.kind = band_verdict(mc.max_root_modulus, tol.boundary_band);
    return mc;
}

cvec frac_map(const FracParams& fp, const cvec& z, const ToleranceProfile& tol) {
    if (fp.n < 2) throw DomainViolation("frac_map: n must be >= 2");
    if (z.size() != static_cast<std::size_t>(fp.n))
        throw DomainViolation("frac_map: dimension mismatch");
    const cplx denom = cplx(static_cast<double>(fp.n)) + fp.lambda * z[0];
    if (std::abs(denom) <= tol.lp_feas_tol) throw PoleHit("frac_map: n + lambda*z1 vanished");
    cvec out(static_cast<std::size_t>(fp.n - 1));
    for (int j = 1; j <= fp.n - 1; ++j) {
        cplx num = static_cast<double>(fp.n - j) * z[static_cast<std::size_t>(j - 1)] +
                   fp.lambda * static_cast<double>(j + 1) * z[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(j - 1)] = num / denom;
    }
    return out;
}

MembershipClass costara_classify(const cvec& z, int lambda_grid_size,
                                 const ToleranceProfile& tol) {
    if (lambda_grid_size < 64)
        throw DomainViolation("costara_classify: lambda_grid_size must be >= 64");
    MembershipClass mc;
    MeasureResult mr = costara_measure(z, lambda_grid_size, tol, 1.0 + 1e-2);
    mc.max_root_modulus = mr.value;
    mc.pole_flag = mr.pole;
    mc.kind = mr.pole ? Membership::Exterior : band_verdict(mr.value, tol.boundary_band);
    return mc;
}

SampleSet sample_interior(int n, int count, std::uint64_t seed) {
    if (count < 1) throw DomainViolation("sample_interior: count must be >= 1");
    SampleSet s;
    s.seed = seed;
    s.strategy = SampleSet::Strategy::Interior;
    DetRng rng(seed);
    for (int i = 0; i < count; ++i) {
        cvec lambda(static_cast<std::size_t>(n));
        for (auto& l : lambda) l = rng.unit_disc();
        s.points.push_back(sym(lambda));
    }
    return s;
}

SampleSet sample_boundary(int n, int count, std::uint64_t seed) {
    if (count < 1) throw DomainViolation("sample_boundary: count must be >= 1");
    SampleSet s;
    s.seed = seed;
    s.strategy = SampleSet::Strategy::Boundary;
    DetRng rng(seed);
    for (int i = 0; i < count; ++i) {
        cvec lambda(static_cast<std::size_t>(n));
        lambda[0] = rng.unit_circle();
        for (std::size_t j = 1; j < lambda.size(); ++j) lambda[j] = rng.unit_disc();
        s.points.push_back(sym(lambda));
    }
    return s;
}

namespace {

// Max root modulus of char_poly(frac_map(lambda, a)); the recursion's merit
// function for the lambda* search.
double boundary_merit(const cvec& a, cplx lambda, const ToleranceProfile& tol) {
    cvec mapped;
    try {
        mapped = frac_map({static_cast<int>(a.size()), lambda}, a, tol);
    } catch (const PoleHit&) {
        return -1.0;
    }
    if (mapped.size() == 1) return std::abs(mapped[0]);
    return max_root_modulus_of(roots(char_poly(mapped), tol));
}

cplx find_boundary_lambda(const cvec& a, const ToleranceProfile& tol) {
    const double target = 1.0 - tol.boundary_band;
    auto merit = [&](cplx l) { return boundary_merit(a, l, tol); };

    // Pass 1: unit circle (empirically where the sup lives; see module notes).
    const int circle_pts = 512;
    struct Candidate {
        double value;
        double angle;
        double radius;
    };
    std::vector<Candidate> top;
    auto consider = [&](double v, double th, double r) {
        top.push_back({v, th, r});
        std::sort(top.begin(), top.end(),
                  [](const Candidate& x, const Candidate& y) { return x.value > y.value; });
        if (top.size() > 3) top.pop_back();
    };
    for (int k = 0; k < circle_pts; ++k) {
        double th = 2.0 * M_PI * k / circle_pts + kAngleOffset;
        consider(merit(cplx(std::cos(th), std::sin(th))), th, 1.0);
    }
    double best_value = top.front().value;
    cplx best_lambda =
        cplx(std::cos(top.front().angle), std::sin(top.front().angle));
    for (const Candidate& c : top) {
        double step = 2.0 * M_PI / circle_pts;
        double th;
        double v = golden_max(
            [&](double t) { return merit(cplx(std::cos(t), std::sin(t))); }, c.angle - step,
            c.angle + step, 90, th);
        if (v > best_value) {
            best_value = v;
            best_lambda = cplx(std::cos(th), std::sin(th));
        }
    }
    if (best_value >= target) return best_lambda;

    // Pass 2: full-disc grid fallback with local angle/radius refinement.
    const int rings = 24, per_ring = 128;
    top.clear();
    for (int i = 1; i <= rings; ++i) {
        double r = static_cast<double>(i) / rings;
        for (int k = 0; k < per_ring; ++k) {
            double th = 2.0 * M_PI * k / per_ring + kAngleOffset + 0.37 * i;
            consider(merit(r * cplx(std::cos(th), std::sin(th))), th, r);
        }
    }
    for (const Candidate& c : top) {
        double th = c.angle, r = c.radius;
        double v = c.value;
        for (int round = 0; round < 3; ++round) {
            double step = 2.0 * M_PI / per_ring / (round + 1.0);
            v = golden_max([&](double t) { return merit(r * cplx(std::cos(t), std::sin(t))); },
                           th - step, th + step, 60, th);
            double rstep = 1.0 / rings / (round + 1.0);
            v = golden_max(
                [&](double rr) {
                    double rc = std::clamp(rr, 0.0, 1.0);
                    return merit(rc * cplx(std::cos(th), std::sin(th)));
                },
                r - rstep, r + rstep, 60, r);
            r = std::clamp(r, 0.0, 1.0);
        }
        if (v > best_value) {
            best_value = v;
            best_lambda = r * cplx(std::cos(th), std::sin(th));
        }
    }
    if (best_value >= target) return best_lambda;
    throw SearchFailure("peak_at: no lambda reached the boundary band (best merit " +
                        std::to_string(best_value) + ")");
}

HoloPtr peak_at_impl(const cvec& a, ToleranceProfile tol) {
    const int n = static_cast<int>(a.size());
    if (n == 1) return HoloFunction::mobius_atom(a[0]);
    const double a1 = std::abs(a[0]);
    if (a1 >= static_cast<double>(n) - tol.peak_value_tol) {
        cplx c = a1 / (static_cast<double>(n) * a[0]);
        return HoloFunction::linear_scale(c, HoloFunction::coordinate(1));
    }
    cplx lambda = find_boundary_lambda(a, tol);
    cvec next = frac_map({n, lambda}, a, tol);
    // One boundary band of slack accumulates per recursion level.
    tol.peak_value_tol += tol.boundary_band;
    HoloPtr outer = peak_at_impl(next, tol);
    return HoloFunction::compose(outer, HoloFunction::fractional_map(n, lambda));
}

} // namespace

HoloPtr peak_at(const cvec& a, const ToleranceProfile& tol) {
    if (classify(a, tol).kind != Membership::Boundary)
        throw DomainViolation("peak_at: point must classify Boundary");
    return peak_at_impl(a, tol);
}

CarathBound carath_lb(const cvec& z, const cvec& w, int grid, const ToleranceProfile& tol) {
    const int n = static_cast<int>(z.size());
    if (w.size() != z.size()) throw DomainViolation("carath_lb: dimension mismatch");
    if (classify(z, tol).kind != Membership::Interior ||
        classify(w, tol).kind != Membership::Interior)
        throw DomainViolation("carath_lb: both points must be Interior");

    // q_Lambda = p_{2,l_{n-1}} o ... o p_{n,l_1} evaluated on a torus grid.
    // Pure grid max: doubling the grid yields a superset of parameters, so
    // the bound is monotone under refinement.
    double best = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
    auto angle = [&](int k) { return 2.0 * M_PI * k / grid + kAngleOffset; };
    for (;;) {
        cvec pz = z, pw = w;
        bool ok = true;
        for (int level = 0; level < n - 1 && ok; ++level) {
            double th = angle(idx[static_cast<std::size_t>(level)]);
            cplx lambda(std::cos(th), std::sin(th));
            FracParams fp{n - level, lambda};
            try {
                pz = frac_map(fp, pz, tol);
                pw = frac_map(fp, pw, tol);
            } catch (const PoleHit&) {
                ok = false; // cannot occur for interior points, guarded anyway
            }
        }
        if (ok) best = std::max(best, mobius_distance(pz[0], pw[0]));

        int level = 0;
        while (level < n - 1) {
            if (++idx[static_cast<std::size_t>(level)] < grid) break;
            idx[static_cast<std::size_t>(level)] = 0;
            ++level;
        }
        if (level == n - 1) break;
    }
    return {best, std::atanh(std::min(best, 1.0 - 1e-16))};
}

} // namespace peaklab::sympoly
