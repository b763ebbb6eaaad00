// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "peaklab/cconvex.hpp"
#include "peaklab/domain_spec.hpp"
#include "peaklab/mobius.hpp"
#include "peaklab/reinhardt.hpp"
#include "peaklab/rng.hpp"
#include "peaklab/sympoly.hpp"
#include "peaklab/transfer.hpp"
#include "peaklab/verify.hpp"

using namespace peaklab;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

cli::DomainSpec sym_domain(int n) {
    return cli::DomainSpec::from_json(json{{"type", "symmetrized_polydisc"}, {"n", n}});
}

cli::DomainSpec reinhardt_spec(const reinhardt::ReinhardtDomain& d) {
    return cli::DomainSpec::from_json(d.to_json());
}

// Mixed sampler for the oracle-agreement sweep: box-uniform points plus
// perturbed boundary points that populate the near-boundary shells.
cvec random_probe_point(int n, DetRng& rng) {
    if (rng.next_double() < 0.8) {
        cvec z(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            double scale = static_cast<double>(n - j) + 0.5;
            z[static_cast<std::size_t>(j)] = {rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
        }
        return z;
    }
    cvec lambda(static_cast<std::size_t>(n));
    lambda[0] = rng.unit_circle();
    for (std::size_t j = 1; j < lambda.size(); ++j) lambda[j] = rng.unit_disc();
    cvec z = sympoly::sym(lambda);
    for (auto& c : z) c += 0.03 * rng.unit_disc();
    return z;
}

bool criterion1(std::string& detail) {
    auto t0 = Clock::now();
    ToleranceProfile tol;
    int tested = 0, skipped = 0, mismatches = 0;
    for (int n : {2, 3}) {
        const int count = n == 2 ? 10000 : 5000;
        const int grid = n == 2 ? 256 : 96;
        DetRng rng(0xC1 + n);
        for (int i = 0; i < count; ++i) {
            cvec z = random_probe_point(n, rng);
            auto truth = sympoly::classify(z, tol);
            if (std::fabs(truth.max_root_modulus - 1.0) < 1e-3) {
                ++skipped;
                continue;
            }
            ++tested;
            auto check = sympoly::costara_classify(z, grid, tol);
            if (check.kind != truth.kind) ++mismatches;
        }
    }
    double dt = seconds_since(t0);
    std::ostringstream os;
    os << tested << " points tested (" << skipped << " in the excluded band), " << mismatches
       << " disagreements, " << dt << " s";
    detail = os.str();
    return mismatches == 0 && dt < 60.0;
}

bool criterion2(std::string& detail) {
    auto t0 = Clock::now();
    DetRng rng(0xC2);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        int n = 2 + static_cast<int>(rng.next_u64() % 4);
        cvec lambda(static_cast<std::size_t>(n));
        for (auto& l : lambda) l = rng.unit_disc();
        cvec z = sympoly::sym(lambda);
        cvec back = sympoly::sym(roots(sympoly::char_poly(z)));
        for (std::size_t j = 0; j < z.size(); ++j)
            worst = std::max(worst, std::abs(z[j] - back[j]));
    }
    double dt = seconds_since(t0);
    std::ostringstream os;
    os << "max component error " << worst << ", " << dt << " s";
    detail = os.str();
    return worst < 1e-8 && dt < 10.0;
}

bool criterion3(std::string& detail) {
    auto t0 = Clock::now();
    ToleranceProfile tol;
    int failures = 0, total = 0;
    double worst_value = 0.0, min_margin = 1.0;
    for (int n : {2, 3}) {
        const int count = n == 2 ? 100 : 50;
        auto pts = sympoly::sample_boundary(n, count, 0xC3 + n);
        auto domain = sym_domain(n);
        for (const auto& a : pts.points) {
            ++total;
            try {
                HoloPtr phi = sympoly::peak_at(a, tol);
                auto rep = cli::verify_peak(phi, a, domain, 10000, 0.1, 0xC3F + total, tol);
                worst_value = std::max(worst_value, std::abs(rep.value_at_target - cplx(1.0)));
                min_margin = std::min(min_margin, rep.margin_off_neighborhood);
                if (!rep.pass || std::abs(rep.value_at_target - cplx(1.0)) > 1e-6) ++failures;
            } catch (const Error&) {
                ++failures;
            }
        }
    }
    double dt = seconds_since(t0);
    std::ostringstream os;
    os << total << " boundary points, " << failures << " failures, worst |phi(a)-1| "
       << worst_value << ", min margin " << min_margin << ", " << dt << " s";
    detail = os.str();
    return failures == 0 && dt < 120.0;
}

bool criterion4(std::string& detail) {
    auto t0 = Clock::now();
    ToleranceProfile tol;
    const double n_target = 3.0, u_radius = 0.5;
    struct Catalog {
        const char* name;
        reinhardt::ReinhardtDomain domain;
        cvec z0;
    };
    std::vector<Catalog> catalogs;
    catalogs.push_back({"log-square", reinhardt::log_square_domain(), {cplx(1.0), cplx(1.0)}});
    catalogs.push_back(
        {"irrational-slice", reinhardt::irrational_slice_domain(), {cplx(1.0), cplx(1.0)}});
    catalogs.push_back({"annulus", reinhardt::annulus_domain(), {cplx(1.0)}});

    std::ostringstream os;
    bool ok = true;
    for (const auto& cat : catalogs) {
        auto samples = reinhardt::sample_log_points(cat.domain, 4096, 0xA11CEULL);
        rvec x0 = reinhardt::log_map(cat.z0);
        double prev_value = 0.0, prev_off = 2.0;
        for (int mu = 1; mu <= 8; ++mu) {
            auto res = reinhardt::laurent_peak(cat.domain, cat.z0, mu, n_target, u_radius, tol);
            double value = std::abs(res.monomial.evaluate(cat.z0));
            double sup = 0.0, off = 0.0;
            for (const rvec& x : samples) {
                double v = std::exp(res.monomial.log_modulus(x));
                sup = std::max(sup, v);
                if (norm2(sub(x, x0)) >= u_radius) off = std::max(off, v);
            }
            const double eps = res.trace.epsilon;
            if (value < std::exp(-eps) - 1e-12 || sup > std::exp(eps) + 1e-9 ||
                off > std::exp(-n_target) * (1 + 1e-9) || value + 1e-6 < prev_value ||
                off > prev_off + 1e-6) {
                ok = false;
                os << cat.name << " mu=" << mu << " violated; ";
            }
            prev_value = value;
            prev_off = off;
        }
        os << cat.name << " ok; ";
    }
    double dt = seconds_since(t0);
    os << dt << " s";
    detail = os.str();
    return ok && dt < 120.0;
}

bool criterion5(std::string& detail) {
    ToleranceProfile tol;
    auto bidisc = reinhardt::bidisc_domain();
    auto square = reinhardt::log_square_domain();
    using reinhardt::PeakVerdict;
    struct Row {
        const char* label;
        const reinhardt::ReinhardtDomain& d;
        cvec z;
        PeakVerdict want;
    };
    const double r = std::exp(-1.0);
    std::vector<Row> table{
        {"bidisc torus", bidisc, {std::polar(1.0, 0.3), std::polar(1.0, -1.2)}, PeakVerdict::Peak},
        {"bidisc boundary ray", bidisc, {cplx(1.0), cplx(0.5)}, PeakVerdict::NotPeak},
        {"bidisc axis (1,0)", bidisc, {cplx(1.0), cplx(0.0)}, PeakVerdict::NotPeak},
        {"bidisc axis (0.5,0)", bidisc, {cplx(0.5), cplx(0.0)}, PeakVerdict::NotPeak},
        {"bidisc origin", bidisc, {cplx(0.0), cplx(0.0)}, PeakVerdict::NotPeak},
        {"square outer corner", square, {cplx(1.0), cplx(1.0)}, PeakVerdict::Peak},
        {"square inner corner", square, {cplx(r), cplx(r)}, PeakVerdict::Peak},
        {"square edge midpoint", square, {cplx(1.0), cplx(std::exp(-0.5))}, PeakVerdict::NotPeak},
    };
    int wrong = 0;
    std::ostringstream os;
    for (const auto& row : table) {
        auto got = reinhardt::classify_peak(row.d, row.z, tol);
        if (got != row.want) {
            ++wrong;
            os << row.label << " misclassified; ";
        }
    }
    os << table.size() << " labeled points, " << wrong << " wrong";
    detail = os.str();
    return wrong == 0;
}

bool criterion6(std::string& detail) {
    ToleranceProfile tol;
    std::ostringstream os;
    bool ok = true;

    // Forward transfer through the symmetrization of the bidisc.
    auto phi = HoloFunction::affine_pairing({cplx(0.5), cplx(0.5)}, {cplx(0.0), cplx(0.0)});
    auto sym2 = transfer::ProperMap::symmetrization(2);
    auto res = transfer::transfer_peak(sym2, phi, {cplx(1.0), cplx(1.0)}, tol);
    double worst_g = 0.0;
    for (const auto& w : sympoly::sample_interior(2, 1000, 0xC6).points) {
        cvec g = res.g->evaluate_vector(w, tol);
        worst_g = std::max(worst_g, std::abs(g[0] - w[0]));
        worst_g = std::max(worst_g, std::abs(g[1] - w[0] * w[0] / 4.0));
    }
    if (worst_g > 1e-10) {
        ok = false;
        os << "g identity error " << worst_g << "; ";
    }
    auto rep = cli::verify_peak(res.composed, res.b, sym_domain(2), 10000, 0.1, 0xC6F, tol);
    if (!rep.pass) {
        ok = false;
        os << "composed transfer failed verification (" << rep.failure_cause << "); ";
    }

    // Pullback through the annulus double cover.
    auto annulus_src = reinhardt_spec(reinhardt::annulus_domain(std::log(0.5), 0.0));
    auto annulus_tgt = reinhardt_spec(reinhardt::annulus_domain(std::log(0.25), 0.0));
    auto psi = HoloFunction::affine_pairing({cplx(0.5)}, {cplx(-1.0)});
    auto pre = cli::verify_peak(psi, {cplx(1.0)}, annulus_tgt, 10000, 0.1, 0xC61, tol);
    if (!pre.pass) {
        ok = false;
        os << "target peak failed its own verification; ";
    }
    auto pw = transfer::ProperMap::power_map({2});
    auto pulled = transfer::pullback_peak(pw, psi, {cplx(1.0)}, 0, 8, 0.4,
                                          annulus_src.sampler(), tol);
    auto prep = cli::verify_peak(pulled, {cplx(1.0)}, annulus_src, 10000, 0.1, 0xC62, tol);
    double other = std::abs(pulled->evaluate({cplx(-1.0)}, tol));
    if (!prep.pass) {
        ok = false;
        os << "pullback failed verification (" << prep.failure_cause << "); ";
    }
    if (other > 1e-9) {
        ok = false;
        os << "value at the other fiber point " << other << "; ";
    }
    os << "g error " << worst_g << ", other-fiber value " << other;
    detail = os.str();
    return ok;
}

bool criterion7(std::string& detail) {
    ToleranceProfile tol;
    auto sym2 = transfer::ProperMap::symmetrization(2);
    cvec w0{cplx(0.0), cplx(0.0)};
    std::vector<double> ts{1e-1, 1e-2, 1e-3};
    std::vector<cvec> seq;
    for (double t : ts) seq.push_back({cplx(2.0 * (1.0 - t)), cplx((1.0 - t) * (1.0 - t))});
    auto entries = transfer::cfc_probe(sym2, w0, seq, 128, tol);
    bool ok = true;
    std::ostringstream os;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        double expect = 1.0 - ts[k];
        if (std::fabs(entries[k].lower_bound_mobius - expect) > 1e-9) ok = false;
        if (k > 0 && entries[k].lower_bound_poincare <= entries[k - 1].lower_bound_poincare)
            ok = false;
        os << "t=" << ts[k] << " poincare=" << entries[k].lower_bound_poincare << "; ";
    }
    if (entries.back().lower_bound_poincare < 3.5) ok = false;
    detail = os.str();
    return ok;
}

bool criterion8(std::string& detail) {
    DetRng rng(0xC8);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng.next_u64() % 3);
        int mu = 1 + static_cast<int>(rng.next_u64() % 6);
        rvec l(static_cast<std::size_t>(n));
        for (auto& v : l) v = rng.uniform(-4.0, 4.0);
        auto pr = reinhardt::dirichlet(l, mu);
        long long kmax = 1;
        for (int i = 0; i < n; ++i) kmax *= mu;
        if (pr.k > kmax) ++violations;
        for (std::size_t j = 0; j < l.size(); ++j) {
            double err = std::fabs(l[j] - static_cast<double>(pr.alpha[j]) /
                                              static_cast<double>(pr.k));
            if (err > 1.0 / (static_cast<double>(mu) * static_cast<double>(pr.k)) + 1e-12)
                ++violations;
        }
    }
    std::ostringstream os;
    os << "100 random functionals, " << violations << " violations";
    detail = os.str();
    return violations == 0;
}

bool criterion9(std::string& detail) {
    ToleranceProfile tol;
    DetRng rng(0xC9);
    int disagreements = 0, recon_failures = 0, polytopes = 0;
    auto march = [](const HRep& p, const rvec& x0, const rvec& dir) {
        double best = 1e300;
        for (std::size_t i = 0; i < p.a.size(); ++i) {
            double ad = dot(p.a[i], dir);
            if (ad > 1e-12) best = std::min(best, (p.b[i] - dot(p.a[i], x0)) / ad);
        }
        return best;
    };
    for (int trial = 0; trial < 50; ++trial) {
        int npts = 4 + static_cast<int>(rng.next_u64() % 6);
        std::vector<rvec> pts;
        for (int i = 0; i < npts; ++i)
            pts.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
        HRep hull = prune_redundant(hull_hrep(pts, {}, 2));
        auto verts = enumerate_vertices(hull);
        if (verts.size() < 3) continue;
        ++polytopes;

        std::vector<rvec> tests(verts);
        for (std::size_t i = 0; i < verts.size(); ++i)
            tests.push_back(scale(0.5, add(verts[i], verts[(i + 1) % verts.size()])));
        rvec centroid(2, 0.0);
        for (const auto& v : verts) centroid = add(centroid, v);
        tests.push_back(scale(1.0 / verts.size(), centroid));

        for (const auto& x : tests) {
            bool inside = true;
            for (std::size_t i = 0; i < hull.a.size(); ++i)
                if (dot(hull.a[i], x) > hull.b[i] + 1e-9) inside = false;
            if (!inside) continue;
            // Brute-force midpoint oracle: random chords plus every vertex
            // difference (random directions almost never align with an edge).
            bool fast = reinhardt::is_extreme(hull, x, tol);
            bool slow = true;
            std::vector<rvec> dirs;
            for (int t = 0; t < 10000; ++t) {
                double th = rng.uniform(0.0, 2.0 * M_PI);
                dirs.push_back({std::cos(th), std::sin(th)});
            }
            for (std::size_t i = 0; i < verts.size() && slow; ++i)
                for (std::size_t j = i + 1; j < verts.size(); ++j) {
                    rvec d = sub(verts[i], verts[j]);
                    double n = norm2(d);
                    if (n > 1e-12) dirs.push_back(scale(1.0 / n, d));
                }
            for (const auto& d : dirs) {
                if (std::min(march(hull, x, d), march(hull, x, scale(-1.0, d))) > 1e-7) {
                    slow = false;
                    break;
                }
            }
            if (fast != slow) ++disagreements;

            auto dec = reinhardt::decompose(hull, x, tol);
            rvec recon = scale(dec.t0, dec.alpha);
            for (std::size_t i = 0; i < dec.vertices.size(); ++i)
                recon = add(recon, scale(dec.weights[i], dec.vertices[i]));
            if (norm2(sub(recon, x)) > 1e-9) ++recon_failures;
        }
    }
    std::ostringstream os;
    os << polytopes << " polytopes, " << disagreements << " oracle disagreements, "
       << recon_failures << " reconstruction failures";
    detail = os.str();
    return disagreements == 0 && recon_failures == 0;
}

bool criterion10(std::string& detail) {
    ToleranceProfile tol;
    const int K = 4;
    auto dk = reinhardt::example61_domain(K, tol);
    reinhardt::LaurentMonomial f;
    f.coeff = cplx(1.0);
    f.exponent = {-1, 1};
    auto rep = reinhardt::extension_probe(dk, f, K, tol);

    bool ok = true;
    std::ostringstream os;
    for (int n = 1; n <= K; ++n) {
        double cap = std::exp(-static_cast<double>(n)) * (1 + 1e-9);
        if (rep.step_sampled_sup[static_cast<std::size_t>(n - 1)] > cap) {
            ok = false;
            os << "step " << n << " sup exceeded e^-" << n << "; ";
        }
    }
    if (rep.hull_shell_sampled_sup < std::exp(-2.0)) {
        ok = false;
        os << "envelope shell sup " << rep.hull_shell_sampled_sup << " below e^-2; ";
    }
    if (rep.dk_shell_sampled_sup > std::exp(-4.0) * (1 + 1e-9)) {
        ok = false;
        os << "D_K shell sup " << rep.dk_shell_sampled_sup << " above e^-4; ";
    }
    os << "steps ok, envelope shell " << rep.hull_shell_sampled_sup << " (LP "
       << rep.hull_shell_lp_sup << "), D_K shell " << rep.dk_shell_sampled_sup;
    detail = os.str();
    return ok;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        std::function<bool(std::string&)> run;
    };
    std::vector<Criterion> criteria{
        {1, "oracle equivalence classify vs costara_classify", criterion1},
        {2, "round trip sym o roots o char_poly", criterion2},
        {3, "peak construction on random boundary points", criterion3},
        {4, "Laurent sequence postconditions on the catalog domains", criterion4},
        {5, "peak-point truth table on bidisc and log square", criterion5},
        {6, "transfer end-to-end (forward and pullback)", criterion6},
        {7, "cfc-probe regression sequence", criterion7},
        {8, "Dirichlet approximation contract", criterion8},
        {9, "extremality vs midpoint oracle and decompose", criterion9},
        {10, "Example 6.1 probe (A(D) vs A(D-hat))", criterion10},
    };

    int failed = 0;
    for (auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %d: %s [%s]\n", ok ? "PASS" : "FAIL", c.id, c.label,
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    if (failed) std::printf("%d criterion(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}
