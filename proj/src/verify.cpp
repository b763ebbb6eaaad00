#include "peaklab/verify.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "peaklab/json_util.hpp"

namespace peaklab::cli {

using nlohmann::json;

namespace {

struct SweepChunk {
    double sup = 0.0;
    double sup_off = 0.0;
    bool strict = true;
    std::string error;
};

SweepChunk sweep(const HoloPtr& f, const cvec& a, const std::vector<cvec>& samples,
                 std::size_t begin, std::size_t end, double radius,
                 const ToleranceProfile& tol) {
    SweepChunk c;
    try {
        for (std::size_t i = begin; i < end; ++i) {
            const cvec& z = samples[i];
            double v = std::abs(f->evaluate(z, tol));
            c.sup = std::max(c.sup, v);
            if (v >= 1.0) c.strict = false;
            double d2 = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k) {
                double dr = std::abs(z[k] - a[k]);
                d2 += dr * dr;
            }
            if (std::sqrt(d2) >= radius) c.sup_off = std::max(c.sup_off, v);
        }
    } catch (const Error& e) {
        c.error = e.what();
    }
    return c;
}

} // namespace

VerificationReport verify_peak(const HoloPtr& f, const cvec& a, const DomainSpec& domain,
                               int interior_count, double radius, std::uint64_t seed,
                               const ToleranceProfile& tol, int threads) {
    VerificationReport rep;
    rep.target = a;
    rep.fingerprint = f->fingerprint();
    rep.neighborhood_radius = radius;
    rep.interior_samples = interior_count;
    rep.seed = seed;
    rep.tol = tol;
    rep.domain = domain.to_json();
    rep.function = f->to_json();

    try {
        rep.value_at_target = f->evaluate(a, tol);
        const auto samples = domain.sample_interior(interior_count, seed);
        const int nthreads = std::max(1, std::min<int>(threads, 64));
        std::vector<SweepChunk> chunks(static_cast<std::size_t>(nthreads));
        if (nthreads == 1) {
            chunks[0] = sweep(f, a, samples, 0, samples.size(), radius, tol);
        } else {
            std::vector<std::thread> pool;
            const std::size_t per = (samples.size() + nthreads - 1) / nthreads;
            for (int t = 0; t < nthreads; ++t) {
                std::size_t b = std::min(samples.size(), per * static_cast<std::size_t>(t));
                std::size_t e = std::min(samples.size(), b + per);
                pool.emplace_back([&, b, e, t] {
                    chunks[static_cast<std::size_t>(t)] = sweep(f, a, samples, b, e, radius, tol);
                });
            }
            for (auto& th : pool) th.join();
        }
        // max/and reduction: bit-identical for any chunking.
        double sup = 0.0, sup_off = 0.0;
        bool strict = true;
        for (const auto& c : chunks) {
            if (!c.error.empty()) throw Error(c.error);
            sup = std::max(sup, c.sup);
            sup_off = std::max(sup_off, c.sup_off);
            strict = strict && c.strict;
        }
        rep.sampled_sup_interior = sup;
        rep.margin_off_neighborhood = 1.0 - sup_off;
        const bool value_ok = std::abs(rep.value_at_target - cplx(1.0)) <= tol.peak_value_tol;
        rep.pass = value_ok && strict && rep.margin_off_neighborhood > 0.0;
        if (!rep.pass) {
            std::ostringstream os;
            if (!value_ok) os << "value at target off 1 by " << std::abs(rep.value_at_target - cplx(1.0)) << "; ";
            if (!strict) os << "an interior sample reached |f| >= 1; ";
            if (rep.margin_off_neighborhood <= 0.0) os << "no margin off the neighborhood; ";
            rep.failure_cause = os.str();
        }
    } catch (const Error& e) {
        rep.pass = false;
        rep.failure_cause = std::string("evaluation error: ") + e.what();
    }
    return rep;
}

json VerificationReport::to_json() const {
    json jt{{"root_converge", tol.root_converge},
            {"boundary_band", tol.boundary_band},
            {"peak_value_tol", tol.peak_value_tol},
            {"lp_feas_tol", tol.lp_feas_tol},
            {"max_iterations", tol.max_iterations}};
    return json{{"target", cvec_to_json(target)},
                {"fingerprint", fingerprint},
                {"value_at_target", cplx_to_json(value_at_target)},
                {"sampled_sup_interior", sampled_sup_interior},
                {"margin_off_neighborhood", margin_off_neighborhood},
                {"neighborhood_radius", neighborhood_radius},
                {"interior_samples", interior_samples},
                {"seed", seed},
                {"tolerances", jt},
                {"verdict", pass ? "Pass" : "Fail"},
                {"failure_cause", failure_cause},
                {"domain", domain},
                {"function", function}};
}

bool reverify(const json& report, const HoloFunction::FiberResolver& resolver,
              std::string* diagnostic) {
    auto fail = [&](const std::string& why) {
        if (diagnostic) *diagnostic = why;
        return false;
    };
    try {
        DomainSpec domain = DomainSpec::from_json(report.at("domain"));
        HoloPtr f = HoloFunction::from_json(report.at("function"), resolver);
        cvec target = json_to_cvec(report.at("target"), "$.target");
        ToleranceProfile tol;
        const json& jt = report.at("tolerances");
        tol.root_converge = jt.at("root_converge").get<double>();
        tol.boundary_band = jt.at("boundary_band").get<double>();
        tol.peak_value_tol = jt.at("peak_value_tol").get<double>();
        tol.lp_feas_tol = jt.at("lp_feas_tol").get<double>();
        tol.max_iterations = jt.at("max_iterations").get<int>();

        VerificationReport again = verify_peak(
            f, target, domain, report.at("interior_samples").get<int>(),
            report.at("neighborhood_radius").get<double>(),
            report.at("seed").get<std::uint64_t>(), tol);

        cplx v = json_to_cplx(report.at("value_at_target"), "$.value_at_target");
        if (v != again.value_at_target) return fail("value_at_target does not reproduce");
        if (report.at("sampled_sup_interior").get<double>() != again.sampled_sup_interior)
            return fail("sampled_sup_interior does not reproduce");
        if (report.at("margin_off_neighborhood").get<double>() != again.margin_off_neighborhood)
            return fail("margin_off_neighborhood does not reproduce");
        const bool pass_recorded = report.at("verdict").get<std::string>() == "Pass";
        if (pass_recorded != again.pass) return fail("verdict does not reproduce");
        return true;
    } catch (const json::exception& e) {
        return fail(std::string("malformed report: ") + e.what());
    } catch (const Error& e) {
        return fail(std::string("re-run error: ") + e.what());
    }
}

void write_samples_csv(const std::string& path, const HoloPtr& f, const DomainSpec& domain,
                       int count, std::uint64_t seed, const ToleranceProfile& tol) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open CSV output file: " + path);
    const int n = domain.dim();
    for (int j = 1; j <= n; ++j) out << "re" << j << ",im" << j << ",";
    out << "abs_value\n";
    out.precision(17);
    for (const cvec& z : domain.sample_interior(count, seed)) {
        double v;
        try {
            v = std::abs(f->evaluate(z, tol));
        } catch (const Error&) {
            v = std::nan("");
        }
        for (const cplx& c : z) out << c.real() << "," << c.imag() << ",";
        out << v << "\n";
    }
}

} // namespace peaklab::cli
