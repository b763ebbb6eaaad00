#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "peaklab/mobius.hpp"
#include "peaklab/rng.hpp"
#include "peaklab/sympoly.hpp"

using namespace peaklab;
using namespace peaklab::sympoly;

TEST_CASE("sym: elementary symmetric reference values") {
    auto check_eq = [](const cvec& got, const cvec& want) {
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-14);
    };
    check_eq(sym({cplx(1.0), cplx(1.0)}), {cplx(2.0), cplx(1.0)});
    check_eq(sym({cplx(0.0, 1.0), cplx(0.0, -1.0)}), {cplx(0.0), cplx(1.0)});
    check_eq(sym({cplx(1.0), cplx(1.0), cplx(1.0)}), {cplx(3.0), cplx(3.0), cplx(1.0)});
}

TEST_CASE("char_poly: Vieta inversion") {
    ComplexPoly p = char_poly({cplx(0.0), cplx(1.0)});
    CHECK(std::abs(p.coeffs[0] - cplx(1.0)) < 1e-15); // t^2 + 1
    CHECK(std::abs(p.coeffs[1]) < 1e-15);

    ComplexPoly q = char_poly({cplx(2.0), cplx(1.0)});
    CHECK(std::abs(q.coeffs[0] - cplx(1.0)) < 1e-15); // t^2 - 2t + 1
    CHECK(std::abs(q.coeffs[1] + cplx(2.0)) < 1e-15);

    ComplexPoly r = char_poly({cplx(0.0), cplx(0.0), cplx(0.0)});
    for (const auto& c : r.coeffs) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("classify: reference points") {
    CHECK(classify({cplx(0.0), cplx(0.0)}).kind == Membership::Interior);
    auto b = classify({cplx(2.0), cplx(1.0)});
    CHECK(b.kind == Membership::Boundary);
    CHECK(std::fabs(b.max_root_modulus - 1.0) <= 1e-8);
    auto e = classify({cplx(3.0), cplx(0.0)});
    CHECK(e.kind == Membership::Exterior);
    CHECK(e.max_root_modulus == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("frac_map: reference values") {
    ToleranceProfile tol;
    // n=2, z=(2,1): (z1 + 2 lambda z2)/(2 + lambda z1) = 1 for lambda != -1.
    for (cplx lambda : {cplx(0.5), cplx(0.0, 0.9), cplx(0.3, 0.3)}) {
        auto v = frac_map({2, lambda}, {cplx(2.0), cplx(1.0)}, tol);
        REQUIRE(v.size() == 1);
        CHECK(std::abs(v[0] - cplx(1.0)) < 1e-14);
    }
    // n=3, lambda=0: (2 z1 / 3, z2 / 3).
    auto v = frac_map({3, cplx(0.0)}, {cplx(0.3, 0.1), cplx(-0.2), cplx(0.05)}, tol);
    CHECK(std::abs(v[0] - cplx(0.2, 0.1 * 2.0 / 3.0)) < 1e-14);
    CHECK(std::abs(v[1] - cplx(-0.2 / 3.0)) < 1e-14);
    // n=2, lambda=1, z=(0,1) -> 2/2 = 1.
    auto w = frac_map({2, cplx(1.0)}, {cplx(0.0), cplx(1.0)}, tol);
    CHECK(std::abs(w[0] - cplx(1.0)) < 1e-14);
    CHECK_THROWS_AS(frac_map({2, cplx(-1.0)}, {cplx(2.0), cplx(1.0)}, tol), PoleHit);
}

TEST_CASE("costara_classify agrees with classify on reference points") {
    CHECK(costara_classify({cplx(0.0), cplx(0.0)}, 128).kind == Membership::Interior);
    CHECK(costara_classify({cplx(2.0), cplx(1.0)}, 128).kind == Membership::Boundary);
    CHECK(costara_classify({cplx(3.0), cplx(0.0)}, 128).kind == Membership::Exterior);
}

TEST_CASE("round trip sym(roots(char_poly(sym(lambda)))) on random tuples") {
    DetRng rng(99);
    for (int n = 2; n <= 5; ++n) {
        for (int trial = 0; trial < 250; ++trial) {
            cvec lambda(static_cast<std::size_t>(n));
            for (auto& l : lambda) l = rng.unit_disc();
            cvec z = sym(lambda);
            cvec back = sym(roots(char_poly(z)));
            for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(z[i] - back[i]) < 1e-8);
        }
    }
}

TEST_CASE("samplers: boundary samples classify Boundary, interior Interior") {
    auto boundary = sample_boundary(2, 50, 5);
    for (const auto& z : boundary.points) CHECK(classify(z).kind == Membership::Boundary);
    auto interior = sample_interior(2, 50, 6);
    for (const auto& z : interior.points) CHECK(classify(z).kind == Membership::Interior);

    auto again = sample_boundary(2, 50, 5);
    for (std::size_t i = 0; i < boundary.points.size(); ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(boundary.points[i][j].real() == again.points[i][j].real());
            CHECK(boundary.points[i][j].imag() == again.points[i][j].imag());
        }
}

TEST_CASE("membership preservation under frac_map for interior points") {
    DetRng rng(17);
    auto interior = sample_interior(3, 30, 21);
    for (const auto& z : interior.points) {
        for (int k = 0; k < 20; ++k) {
            cplx lambda = rng.unit_disc() * 0.999 + cplx(0.0);
            auto mapped = frac_map({3, lambda}, z);
            CHECK(classify(mapped).kind != Membership::Exterior);
        }
    }
}

TEST_CASE("peak_at: linear branch at (2,1)") {
    auto phi = peak_at({cplx(2.0), cplx(1.0)});
    cplx at_a = phi->evaluate({cplx(2.0), cplx(1.0)});
    CHECK(std::abs(at_a - cplx(1.0)) < 1e-12);
    // phi(z) = z1/2 on samples.
    DetRng rng(3);
    for (int i = 0; i < 200; ++i) {
        cvec z{4.0 * rng.unit_disc(), 2.0 * rng.unit_disc()};
        CHECK(std::abs(phi->evaluate(z) - z[0] / 2.0) < 1e-14);
    }
}

TEST_CASE("peak_at: fractional branch at (0,1)") {
    cvec a{cplx(0.0), cplx(1.0)};
    auto phi = peak_at(a);
    CHECK(std::abs(phi->evaluate(a) - cplx(1.0)) < 1e-6);
    auto samples = sample_interior(2, 10000, 44);
    double sup = 0.0;
    for (const auto& z : samples.points) sup = std::max(sup, std::abs(phi->evaluate(z)));
    CHECK(sup < 1.0);
}

TEST_CASE("peak_at: n=1 rotation") {
    cplx a = std::polar(1.0, 0.7);
    auto phi = peak_at({a});
    CHECK(std::abs(phi->evaluate({a}) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(phi->evaluate({cplx(0.2, 0.1)}) - std::conj(a) * cplx(0.2, 0.1)) < 1e-14);
}

TEST_CASE("peak_at: random boundary points of G_2 and G_3 verify") {
    for (int n : {2, 3}) {
        auto pts = sample_boundary(n, n == 2 ? 8 : 5, 77);
        auto interior = sample_interior(n, 2000, 78);
        for (const auto& a : pts.points) {
            auto phi = peak_at(a);
            CHECK(std::abs(phi->evaluate(a) - cplx(1.0)) <= 1e-6);
            for (const auto& z : interior.points)
                CHECK(std::abs(phi->evaluate(z)) < 1.0);
        }
    }
}

TEST_CASE("carath_lb: reference behavior") {
    cvec z{cplx(0.0), cplx(0.0)};
    CHECK(carath_lb(z, z, 64).mobius == 0.0);

    // n=2, w=(0,p): q_lambda(0,0)=0, q_lambda(w)=lambda p, bound = |p|.
    cvec w{cplx(0.0), cplx(0.3, 0.2)};
    auto b = carath_lb(z, w, 128);
    CHECK(b.mobius == doctest::Approx(std::abs(w[1])).epsilon(1e-6));

    // Symmetry and monotone grid refinement.
    cvec u{cplx(0.4, -0.1), cplx(0.05, 0.1)};
    auto zw = carath_lb(z, u, 64);
    auto wz = carath_lb(u, z, 64);
    CHECK(zw.mobius == doctest::Approx(wz.mobius).epsilon(1e-13));
    auto fine = carath_lb(z, u, 128);
    CHECK(fine.mobius >= zw.mobius - 1e-15);
}
