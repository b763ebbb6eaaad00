#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "peaklab/cconvex.hpp"
#include "peaklab/sympoly.hpp"
#include "peaklab/transfer.hpp"
#include "peaklab/verify.hpp"

using namespace peaklab;
using namespace peaklab::cli;
using nlohmann::json;

namespace {

DomainSpec sym_domain(int n) {
    return DomainSpec::from_json(json{{"type", "symmetrized_polydisc"}, {"n", n}});
}

DomainSpec disc_domain() {
    return DomainSpec::from_json(json{{"type", "polydisc"}, {"n", 1}});
}

} // namespace

TEST_CASE("verify_peak: constant one fails, Moebius peak passes") {
    auto one = HoloFunction::constant(cplx(1.0));
    auto rep = verify_peak(one, {cplx(1.0)}, disc_domain(), 2000);
    CHECK_FALSE(rep.pass);

    auto mob = HoloFunction::affine_pairing({cplx(0.5)}, {cplx(-1.0)}); // (1+w)/2
    auto rep2 = verify_peak(mob, {cplx(1.0)}, disc_domain(), 2000);
    CHECK(rep2.pass);
    CHECK(rep2.margin_off_neighborhood > 0.0);
}

TEST_CASE("verify_peak: peak_at on G_2 passes with positive margin") {
    cvec a{cplx(0.0), cplx(1.0)};
    auto phi = sympoly::peak_at(a);
    auto rep = verify_peak(phi, a, sym_domain(2), 10000);
    CHECK(rep.pass);
    CHECK(rep.margin_off_neighborhood > 0.0);
    CHECK(std::abs(rep.value_at_target - cplx(1.0)) <= 1e-6);
}

TEST_CASE("verify_peak: thread count does not change the numbers") {
    cvec a{cplx(0.0), cplx(1.0)};
    auto phi = sympoly::peak_at(a);
    auto serial = verify_peak(phi, a, sym_domain(2), 4000, 0.1, 0xF00D, {}, 1);
    auto parallel = verify_peak(phi, a, sym_domain(2), 4000, 0.1, 0xF00D, {}, 4);
    CHECK(serial.sampled_sup_interior == parallel.sampled_sup_interior);
    CHECK(serial.margin_off_neighborhood == parallel.margin_off_neighborhood);
    CHECK(serial.value_at_target == parallel.value_at_target);
}

TEST_CASE("reports re-run bit-exactly and detect tampering") {
    cvec a{cplx(2.0), cplx(1.0)};
    auto phi = sympoly::peak_at(a);
    auto rep = verify_peak(phi, a, sym_domain(2), 3000);
    REQUIRE(rep.pass);
    json j = rep.to_json();
    std::string why;
    CHECK(reverify(j, {}, &why));

    json tampered = j;
    tampered["sampled_sup_interior"] = j["sampled_sup_interior"].get<double>() + 1e-12;
    CHECK_FALSE(reverify(tampered, {}, &why));
}

TEST_CASE("domain spec diagnostics name the offending field") {
    CHECK_THROWS_WITH_AS(DomainSpec::from_json(json{{"type", "symmetrized_polydisc"}}),
                         doctest::Contains("$.n"), InputError);
    CHECK_THROWS_WITH_AS(DomainSpec::from_json(json{{"type", "nonsense"}}),
                         doctest::Contains("$.type"), InputError);
    json bad_reinhardt{{"type", "reinhardt"},
                       {"pieces", json::array({json{{"A", json::array({json::array({1.0, 0.0})})}}})},
                       {"meets_axes", json::array({false, false})}};
    CHECK_THROWS_WITH_AS(DomainSpec::from_json(bad_reinhardt), doctest::Contains("$.pieces[0]"),
                         InputError);
}

TEST_CASE("negative regression: half-disc square map fails verification at the slit") {
    // phi(z) = 1/(1 + z - i/2) truly peaks the half-disc {|z|<1, Re z>0}
    // at a = i/2 (the level circle is tangent to the edge there).
    cplx a(0.0, 0.5);
    auto phi = HoloFunction::int_power(
        HoloFunction::affine_pairing({cplx(1.0)}, {cplx(-1.0, 0.5)}), -1);
    CHECK(std::abs(phi->evaluate({a}) - cplx(1.0)) < 1e-14);

    // Half-disc as a convex body: circumscribed polygon cut by Re z >= 0.
    auto polygon = cconvex::disc_polygon(64);
    rmat rows = polygon.hrep().a;
    rvec rhs = polygon.hrep().b;
    rows.push_back({-1.0, 0.0});
    rhs.push_back(0.0);
    cconvex::ConvexBody halfdisc(rows, rhs, 1);
    DomainSpec source = DomainSpec::from_json(halfdisc.to_json());

    auto pre = verify_peak(phi, {a}, source, 10000);
    CHECK(pre.pass);

    // Pushing through z -> z^2 toward the slit point b = -1/4 must fail:
    // the catalog fiber includes the reflected root outside the half-disc,
    // where phi is unbounded.
    auto map = transfer::ProperMap::power_map({2});
    auto res = transfer::transfer_peak(map, phi, {a});
    CHECK(std::abs(res.b[0] - cplx(-0.25)) < 1e-14);
    auto rep = verify_peak(res.composed, res.b, disc_domain(), 10000);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("sampled CSV sweep has the documented shape") {
    cvec a{cplx(2.0), cplx(1.0)};
    auto phi = sympoly::peak_at(a);
    const std::string path = "/tmp/peaklab_sweep_test.csv";
    write_samples_csv(path, phi, sym_domain(2), 50, 11);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "re1,im1,re2,im2,abs_value");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 50);
}
