// peaklab: construct and numerically verify holomorphic peak functions on
// symmetrized polydiscs, Reinhardt domains and convex bodies, and probe
// their behavior under proper holomorphic maps.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "peaklab/cconvex.hpp"
#include "peaklab/domain_spec.hpp"
#include "peaklab/json_util.hpp"
#include "peaklab/reinhardt.hpp"
#include "peaklab/sympoly.hpp"
#include "peaklab/transfer.hpp"
#include "peaklab/verify.hpp"

using namespace peaklab;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw InputError(path + ": JSON parse error: " + e.what());
    }
}

json parse_inline(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string(what) + ": JSON parse error: " + e.what());
    }
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot open output file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

HoloFunction::FiberResolver map_resolver() {
    return [](const json& j) -> std::shared_ptr<const FiberProvider> {
        return transfer::ProperMap::from_json(j);
    };
}

struct PeakInput {
    HoloPtr function;
    cvec point;
};

PeakInput load_peak(const std::string& path) {
    json j = load_json(path);
    PeakInput p;
    p.function = HoloFunction::from_json(j.at("function"), map_resolver());
    p.point = json_to_cvec(j.at("point"), "$.point");
    return p;
}

const char* membership_name(sympoly::Membership m) {
    switch (m) {
    case sympoly::Membership::Interior: return "Interior";
    case sympoly::Membership::Boundary: return "Boundary";
    case sympoly::Membership::Exterior: return "Exterior";
    }
    return "?";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"peak functions, Shilov boundaries and proper-map transfer"};
    app.require_subcommand(1);

    std::string domain_path, point_text, out_path, csv_path, map_path;
    std::string peak_path, sequence_text, report_path, from_text, to_text;
    int mu = 4, grid = 128, steps = 4, fiber_index = 0, samples = 10000, threads = 1;
    double radius = 0.1, n_target = 3.0, u_radius = 0.5;
    std::uint64_t seed = 0xF00D;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "report output file (default: stdout)");
        cmd->add_option("--samples", samples, "interior sample count");
        cmd->add_option("--seed", seed, "sampling seed");
        cmd->add_option("--threads", threads, "sampling threads (deterministic reduction)");
    };

    auto* c_classify = app.add_subcommand("classify", "membership in the symmetrized polydisc");
    c_classify->add_option("--domain", domain_path)->required();
    c_classify->add_option("--point", point_text)->required();
    c_classify->add_option("--grid", grid, "lambda grid for the Costara cross-check");
    add_common(c_classify);

    auto* c_peak = app.add_subcommand("peak", "construct and verify a peak function");
    c_peak->add_option("--domain", domain_path)->required();
    c_peak->add_option("--point", point_text)->required();
    c_peak->add_option("--radius", radius, "verification neighborhood radius");
    c_peak->add_option("--csv", csv_path, "CSV of sampled |f| values");
    add_common(c_peak);

    auto* c_rclass = app.add_subcommand("reinhardt-classify", "peak-point classification");
    c_rclass->add_option("--domain", domain_path)->required();
    c_rclass->add_option("--point", point_text)->required();
    add_common(c_rclass);

    auto* c_laurent = app.add_subcommand("laurent", "Laurent-monomial weak peak sequence element");
    c_laurent->add_option("--domain", domain_path)->required();
    c_laurent->add_option("--point", point_text)->required();
    c_laurent->add_option("--mu", mu, "sequence index");
    c_laurent->add_option("--N", n_target, "off-neighborhood decay target");
    c_laurent->add_option("--radius", u_radius, "Reinhardt neighborhood radius (log scale)");
    add_common(c_laurent);

    auto* c_transfer = app.add_subcommand("transfer", "push a peak function forward");
    c_transfer->add_option("--map", map_path)->required();
    c_transfer->add_option("--source-peak", peak_path)->required();
    c_transfer->add_option("--radius", radius);
    c_transfer->add_option("--csv", csv_path);
    add_common(c_transfer);

    auto* c_pullback = app.add_subcommand("pullback", "pull a peak function back through a map");
    c_pullback->add_option("--map", map_path)->required();
    c_pullback->add_option("--target-peak", peak_path)->required();
    c_pullback->add_option("--fiber-index", fiber_index);
    c_pullback->add_option("--truncation", steps, "Bishop series truncation");
    c_pullback->add_option("--radius", radius);
    add_common(c_pullback);

    auto* c_cfc = app.add_subcommand("cfc-probe", "Caratheodory growth along a sequence");
    c_cfc->add_option("--map", map_path)->required();
    c_cfc->add_option("--from", from_text, "base point w0")->required();
    c_cfc->add_option("--sequence", sequence_text, "JSON array of target points")->required();
    c_cfc->add_option("--grid", grid);
    add_common(c_cfc);

    auto* c_env = app.add_subcommand("envelope", "envelope of holomorphy (log-convex hull)");
    c_env->add_option("--domain", domain_path)->required();
    add_common(c_env);

    auto* c_ext = app.add_subcommand("extension-probe", "Example-style A(D) vs A(D-hat) probe");
    c_ext->add_option("--steps", steps, "staircase truncation K");
    add_common(c_ext);

    auto* c_carath = app.add_subcommand("carath-lb", "Caratheodory lower bound");
    c_carath->add_option("--domain", domain_path)->required();
    c_carath->add_option("--from", from_text)->required();
    c_carath->add_option("--to", to_text)->required();
    c_carath->add_option("--grid", grid);
    add_common(c_carath);

    auto* c_verify = app.add_subcommand("verify", "re-run a verification report bit-exactly");
    c_verify->add_option("--report", report_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        ToleranceProfile tol;

        if (c_classify->parsed()) {
            cli::DomainSpec d = cli::DomainSpec::load(domain_path);
            if (d.type() != cli::DomainSpec::Type::SymmetrizedPolydisc)
                throw InputError("classify: domain must be symmetrized_polydisc");
            cvec z = json_to_cvec(parse_inline(point_text, "--point"), "--point");
            auto mc = sympoly::classify(z, tol);
            auto cc = sympoly::costara_classify(z, std::max(64, grid), tol);
            emit(json{{"kind", membership_name(mc.kind)},
                      {"max_root_modulus", mc.max_root_modulus},
                      {"witness_roots", cvec_to_json(mc.witness_roots)},
                      {"costara_kind", membership_name(cc.kind)},
                      {"costara_measure", cc.max_root_modulus},
                      {"agree", mc.kind == cc.kind}},
                 out_path);
            return kExitPass;
        }

        if (c_peak->parsed()) {
            cli::DomainSpec d = cli::DomainSpec::load(domain_path);
            cvec a = json_to_cvec(parse_inline(point_text, "--point"), "--point");
            if (d.type() == cli::DomainSpec::Type::SymmetrizedPolydisc) {
                HoloPtr phi = sympoly::peak_at(a, tol);
                auto rep = cli::verify_peak(phi, a, d, samples, radius, seed, tol, threads);
                if (!csv_path.empty()) cli::write_samples_csv(csv_path, phi, d, samples, seed, tol);
                emit(rep.to_json(), out_path);
                return rep.pass ? kExitPass : kExitVerifyFail;
            }
            if (d.type() == cli::DomainSpec::Type::Convex) {
                auto wp = cconvex::weak_peak(d.convex_body(), a, tol);
                double sup = 0.0;
                bool strict = true;
                for (const cvec& z : d.sample_interior(samples, seed)) {
                    double v = std::abs(wp.phi->evaluate(z, tol));
                    sup = std::max(sup, v);
                    if (v >= 1.0) strict = false;
                }
                // Weak peak: the value at a itself is a limit along the ray.
                double x = std::log(1e-12 / wp.diameter);
                double ray = std::exp(x / (x * x + M_PI * M_PI));
                bool pass = strict && ray > 0.9;
                if (!csv_path.empty())
                    cli::write_samples_csv(csv_path, wp.phi, d, samples, seed, tol);
                emit(json{{"kind", "weak_peak"},
                          {"diameter", wp.diameter},
                          {"nu", cvec_to_json(wp.nu)},
                          {"sampled_sup_interior", sup},
                          {"ray_value_at_1e-12", ray},
                          {"verdict", pass ? "Pass" : "Fail"},
                          {"function", wp.phi->to_json()}},
                     out_path);
                return pass ? kExitPass : kExitVerifyFail;
            }
            throw InputError("peak: supported domains are symmetrized_polydisc and convex");
        }

        if (c_rclass->parsed()) {
            cli::DomainSpec d = cli::DomainSpec::load(domain_path);
            if (d.type() != cli::DomainSpec::Type::Reinhardt)
                throw InputError("reinhardt-classify: domain must be reinhardt");
            cvec z = json_to_cvec(parse_inline(point_text, "--point"), "--point");
            auto verdict = reinhardt::classify_peak(d.reinhardt_domain(), z, tol);
            int zeros = 0;
            for (const cplx& c : z)
                if (c == cplx(0.0)) ++zeros;
            json out{{"verdict", verdict == reinhardt::PeakVerdict::Peak ? "Peak" : "NotPeak"}};
            // Points with several vanishing coordinates go through iterated
            // peeling, which extrapolates the single-zero statement.
            if (zeros >= 2) out["multi_zero_extrapolation"] = true;
            emit(out, out_path);
            return kExitPass;
        }

        if (c_laurent->parsed()) {
            cli::DomainSpec d = cli::DomainSpec::load(domain_path);
            if (d.type() != cli::DomainSpec::Type::Reinhardt)
                throw InputError("laurent: domain must be reinhardt");
            cvec z0 = json_to_cvec(parse_inline(point_text, "--point"), "--point");
            auto res = reinhardt::laurent_peak(d.reinhardt_domain(), z0, mu, n_target, u_radius, tol);
            emit(json{{"monomial", res.monomial.to_json()},
                      {"trace", res.trace.to_json()},
                      {"value_at_point", std::abs(res.monomial.evaluate(z0))}},
                 out_path);
            return kExitPass;
        }

        if (c_transfer->parsed()) {
            json mj = load_json(map_path);
            auto map = transfer::ProperMap::from_json(mj);
            cli::DomainSpec source = cli::DomainSpec::from_json(mj.at("source"));
            cli::DomainSpec target = cli::DomainSpec::from_json(mj.at("target"));
            PeakInput src = load_peak(peak_path);
            auto pre = cli::verify_peak(src.function, src.point, source, samples, radius, seed, tol, threads);
            if (!pre.pass) {
                emit(json{{"stage", "source-peak"}, {"report", pre.to_json()}}, out_path);
                return kExitVerifyFail;
            }
            auto res = transfer::transfer_peak(map, src.function, src.point, tol);
            auto rep = cli::verify_peak(res.composed, res.b, target, samples, radius, seed, tol, threads);
            if (!csv_path.empty())
                cli::write_samples_csv(csv_path, res.composed, target, samples, seed, tol);
            emit(json{{"b", cvec_to_json(res.b)},
                      {"g_at_b", cvec_to_json(res.g_at_b)},
                      {"report", rep.to_json()}},
                 out_path);
            return rep.pass ? kExitPass : kExitVerifyFail;
        }

        if (c_pullback->parsed()) {
            json mj = load_json(map_path);
            auto map = transfer::ProperMap::from_json(mj);
            cli::DomainSpec source = cli::DomainSpec::from_json(mj.at("source"));
            cli::DomainSpec target = cli::DomainSpec::from_json(mj.at("target"));
            PeakInput tgt = load_peak(peak_path);
            auto pre = cli::verify_peak(tgt.function, tgt.point, target, samples, radius, seed, tol, threads);
            if (!pre.pass) {
                emit(json{{"stage", "target-peak"}, {"report", pre.to_json()}}, out_path);
                return kExitVerifyFail;
            }
            auto fiber_pts = transfer::fiber(*map, tgt.point, tol);
            if (fiber_index < 0 || fiber_index >= static_cast<int>(fiber_pts.size()))
                throw InputError("pullback: --fiber-index out of range");
            auto pulled = transfer::pullback_peak(map, tgt.function, tgt.point,
                                                  static_cast<std::size_t>(fiber_index), 8, 0.4,
                                                  source.sampler(), tol);
            auto rep = cli::verify_peak(pulled, fiber_pts[static_cast<std::size_t>(fiber_index)],
                                        source, samples, radius, seed, tol, threads);
            json others = json::array();
            for (std::size_t i = 0; i < fiber_pts.size(); ++i) {
                if (static_cast<int>(i) == fiber_index) continue;
                others.push_back(std::abs(pulled->evaluate(fiber_pts[i], tol)));
            }
            emit(json{{"fiber", [&] {
                           json f = json::array();
                           for (const auto& p : fiber_pts) f.push_back(cvec_to_json(p));
                           return f;
                       }()},
                      {"value_at_other_fiber_points", others},
                      {"report", rep.to_json()}},
                 out_path);
            return rep.pass ? kExitPass : kExitVerifyFail;
        }

        if (c_cfc->parsed()) {
            json mj = load_json(map_path);
            auto map = transfer::ProperMap::from_json(mj);
            cvec w0 = json_to_cvec(parse_inline(from_text, "--from"), "--from");
            json sj = parse_inline(sequence_text, "--sequence");
            std::vector<cvec> seq;
            for (std::size_t i = 0; i < sj.size(); ++i)
                seq.push_back(json_to_cvec(sj[i], "--sequence[" + std::to_string(i) + "]"));
            auto entries = transfer::cfc_probe(map, w0, seq, std::max(16, grid), tol);
            json out = json::array();
            for (const auto& e : entries)
                out.push_back(json{{"index", e.index},
                                   {"lower_bound_mobius", e.lower_bound_mobius},
                                   {"lower_bound_poincare", e.lower_bound_poincare}});
            emit(json{{"entries", out}}, out_path);
            return kExitPass;
        }

        if (c_env->parsed()) {
            cli::DomainSpec d = cli::DomainSpec::load(domain_path);
            if (d.type() != cli::DomainSpec::Type::Reinhardt)
                throw InputError("envelope: domain must be reinhardt");
            auto env = reinhardt::envelope(d.reinhardt_domain(), tol);
            emit(env.to_json(), out_path);
            return kExitPass;
        }

        if (c_ext->parsed()) {
            auto dk = reinhardt::example61_domain(steps, tol);
            reinhardt::LaurentMonomial f;
            f.coeff = cplx(1.0);
            f.exponent = {-1, 1};
            auto rep = reinhardt::extension_probe(dk, f, steps, tol);
            emit(rep.to_json(), out_path);
            return kExitPass;
        }

        if (c_carath->parsed()) {
            cli::DomainSpec d = cli::DomainSpec::load(domain_path);
            if (d.type() != cli::DomainSpec::Type::SymmetrizedPolydisc)
                throw InputError("carath-lb: domain must be symmetrized_polydisc");
            cvec z = json_to_cvec(parse_inline(from_text, "--from"), "--from");
            cvec w = json_to_cvec(parse_inline(to_text, "--to"), "--to");
            auto b = sympoly::carath_lb(z, w, std::max(16, grid), tol);
            emit(json{{"mobius", b.mobius}, {"poincare", b.poincare}}, out_path);
            return kExitPass;
        }

        if (c_verify->parsed()) {
            json rep = load_json(report_path);
            std::string why;
            const bool ok = cli::reverify(rep, map_resolver(), &why);
            if (!ok) std::cerr << "verify: " << why << "\n";
            std::cout << (ok ? "reproduced" : "mismatch") << "\n";
            return ok ? kExitPass : kExitVerifyFail;
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NonConvergence& e) {
        std::cerr << "numeric nonconvergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
