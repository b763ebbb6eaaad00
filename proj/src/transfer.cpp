#include "peaklab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peaklab/mobius.hpp"

namespace peaklab::transfer {

using nlohmann::json;

std::shared_ptr<const ProperMap> ProperMap::power_map(std::vector<int> exponents) {
    if (exponents.empty()) throw DomainViolation("PowerMap: needs at least one exponent");
    for (int k : exponents)
        if (k < 1) throw DomainViolation("PowerMap: exponents must be positive");
    auto m = std::shared_ptr<ProperMap>(new ProperMap);
    m->kind_ = Kind::PowerMap;
    m->exponents_ = std::move(exponents);
    return m;
}

std::shared_ptr<const ProperMap> ProperMap::symmetrization(int n) {
    if (n < 1) throw DomainViolation("Symmetrization: n must be >= 1");
    auto m = std::shared_ptr<ProperMap>(new ProperMap);
    m->kind_ = Kind::Symmetrization;
    m->n_ = n;
    return m;
}

std::shared_ptr<const ProperMap>
ProperMap::composition(std::vector<std::shared_ptr<const ProperMap>> stages) {
    if (stages.empty()) throw DomainViolation("Composition: needs at least one stage");
    for (std::size_t i = 1; i < stages.size(); ++i)
        if (stages[i]->source_dim() != stages[i - 1]->target_dim())
            throw DomainViolation("Composition: stage dimensions do not chain");
    auto m = std::shared_ptr<ProperMap>(new ProperMap);
    m->kind_ = Kind::Composition;
    m->stages_ = std::move(stages);
    return m;
}

int ProperMap::source_dim() const {
    switch (kind_) {
    case Kind::PowerMap: return static_cast<int>(exponents_.size());
    case Kind::Symmetrization: return n_;
    case Kind::Composition: return stages_.front()->source_dim();
    }
    return 0;
}

int ProperMap::target_dim() const {
    switch (kind_) {
    case Kind::PowerMap: return static_cast<int>(exponents_.size());
    case Kind::Symmetrization: return n_;
    case Kind::Composition: return stages_.back()->target_dim();
    }
    return 0;
}

int ProperMap::multiplicity() const {
    switch (kind_) {
    case Kind::PowerMap: {
        int m = 1;
        for (int k : exponents_) m *= k;
        return m;
    }
    case Kind::Symmetrization: {
        int m = 1;
        for (int i = 2; i <= n_; ++i) m *= i;
        return m;
    }
    case Kind::Composition: {
        int m = 1;
        for (const auto& s : stages_) m *= s->multiplicity();
        return m;
    }
    }
    return 1;
}

cvec ProperMap::apply(const cvec& z) const {
    switch (kind_) {
    case Kind::PowerMap: {
        if (z.size() != exponents_.size())
            throw DomainViolation("PowerMap: dimension mismatch");
        cvec w(z.size());
        for (std::size_t j = 0; j < z.size(); ++j)
            w[j] = std::pow(z[j], static_cast<double>(exponents_[j]));
        return w;
    }
    case Kind::Symmetrization: {
        if (static_cast<int>(z.size()) != n_)
            throw DomainViolation("Symmetrization: dimension mismatch");
        return elementary_symmetric(z);
    }
    case Kind::Composition: {
        cvec w = z;
        for (const auto& s : stages_) w = s->apply(w);
        return w;
    }
    }
    throw DomainViolation("ProperMap: unknown kind");
}

namespace {

cvec kth_roots(const cplx& w, int k) {
    cvec out(static_cast<std::size_t>(k));
    if (w == cplx(0.0)) return out; // k-fold zero
    double r = std::pow(std::abs(w), 1.0 / k);
    double base = std::arg(w) / k;
    for (int l = 0; l < k; ++l)
        out[static_cast<std::size_t>(l)] = std::polar(r, base + 2.0 * M_PI * l / k);
    return out;
}

} // namespace

std::vector<cvec> ProperMap::fiber_tuples(const cvec& w) const {
    switch (kind_) {
    case Kind::PowerMap: {
        if (w.size() != exponents_.size())
            throw DomainViolation("PowerMap fiber: dimension mismatch");
        std::vector<cvec> tuples{{}};
        for (std::size_t j = 0; j < w.size(); ++j) {
            cvec roots_j = kth_roots(w[j], exponents_[j]);
            std::vector<cvec> next;
            for (const cvec& t : tuples)
                for (const cplx& r : roots_j) {
                    cvec ext = t;
                    ext.push_back(r);
                    next.push_back(std::move(ext));
                }
            tuples.swap(next);
        }
        return tuples;
    }
    case Kind::Symmetrization: {
        if (static_cast<int>(w.size()) != n_)
            throw DomainViolation("Symmetrization fiber: dimension mismatch");
        cvec rts = roots(sympoly::char_poly(w));
        std::vector<int> idx(rts.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<cvec> tuples;
        // Index permutations keep duplicated roots duplicated, so the fiber
        // always has n! ordered tuples counted with multiplicity.
        do {
            cvec t(rts.size());
            for (std::size_t i = 0; i < rts.size(); ++i)
                t[i] = rts[static_cast<std::size_t>(idx[i])];
            tuples.push_back(std::move(t));
        } while (std::next_permutation(idx.begin(), idx.end()));
        return tuples;
    }
    case Kind::Composition: {
        std::vector<cvec> tuples{w};
        for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
            std::vector<cvec> next;
            for (const cvec& t : tuples) {
                auto f = (*it)->fiber_tuples(t);
                next.insert(next.end(), f.begin(), f.end());
            }
            tuples.swap(next);
        }
        return tuples;
    }
    }
    throw DomainViolation("ProperMap: unknown kind");
}

HoloPtr ProperMap::as_holo() const {
    switch (kind_) {
    case Kind::PowerMap:
        if (exponents_.size() == 1)
            return HoloFunction::monomial(cplx(1.0), {exponents_[0]});
        throw DomainViolation("as_holo: multi-variable power maps are not tree-representable");
    case Kind::Symmetrization: {
        std::vector<HoloPtr> coords;
        for (int j = 1; j <= n_; ++j) coords.push_back(HoloFunction::coordinate(j));
        return HoloFunction::sym_compose(std::move(coords));
    }
    case Kind::Composition: {
        HoloPtr acc = stages_.front()->as_holo();
        for (std::size_t i = 1; i < stages_.size(); ++i)
            acc = HoloFunction::compose(stages_[i]->as_holo(), acc);
        return acc;
    }
    }
    throw DomainViolation("ProperMap: unknown kind");
}

json ProperMap::describe() const {
    switch (kind_) {
    case Kind::PowerMap: return json{{"kind", "power_map"}, {"exponents", exponents_}};
    case Kind::Symmetrization: return json{{"kind", "symmetrization"}, {"n", n_}};
    case Kind::Composition: {
        json stages = json::array();
        for (const auto& s : stages_) stages.push_back(s->describe());
        return json{{"kind", "composition"}, {"maps", stages}};
    }
    }
    return {};
}

std::shared_ptr<const ProperMap> ProperMap::from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power_map") return power_map(j.at("exponents").get<std::vector<int>>());
    if (kind == "symmetrization") return symmetrization(j.at("n").get<int>());
    if (kind == "composition") {
        std::vector<std::shared_ptr<const ProperMap>> stages;
        for (const auto& s : j.at("maps")) stages.push_back(from_json(s));
        return composition(std::move(stages));
    }
    throw InputError("unknown proper map kind: " + kind);
}

std::vector<cvec> fiber(const ProperMap& f, const cvec& w, const ToleranceProfile& tol) {
    tol.validate();
    auto tuples = f.fiber_tuples(w);
    if (static_cast<int>(tuples.size()) != f.multiplicity())
        throw Error("fiber: tuple count does not match multiplicity");
    return tuples;
}

TransferResult transfer_peak(std::shared_ptr<const ProperMap> f, const HoloPtr& phi,
                             const cvec& a, const ToleranceProfile& tol) {
    TransferResult res;
    res.b = f->apply(a);
    res.g = HoloFunction::fiber_compose(f, phi);
    res.g_at_b = res.g->evaluate_vector(res.b, tol);
    auto mc = sympoly::classify(res.g_at_b, tol);
    if (mc.kind != sympoly::Membership::Boundary)
        throw FiberBoundaryMismatch(
            "transfer_peak: g(b) classified " +
            std::string(mc.kind == sympoly::Membership::Interior ? "Interior" : "Exterior") +
            " (max root modulus " + std::to_string(mc.max_root_modulus) +
            "); phi was not a true peak at a");
    HoloPtr psi = sympoly::peak_at(res.g_at_b, tol);
    res.composed = HoloFunction::compose(psi, res.g);
    return res;
}

HoloPtr separator(const std::vector<cvec>& fiber_points, std::size_t j,
                  const ToleranceProfile& tol) {
    if (j >= fiber_points.size()) throw DomainViolation("separator: index out of range");
    const cvec& xj = fiber_points[j];
    const std::size_t dim = xj.size();
    std::vector<HoloPtr> factors;
    cplx norm(1.0);
    for (std::size_t l = 0; l < fiber_points.size(); ++l) {
        if (l == j) continue;
        std::size_t sigma = dim;
        for (std::size_t c = 0; c < dim; ++c) {
            if (std::abs(xj[c] - fiber_points[l][c]) > tol.lp_feas_tol) {
                sigma = c;
                break;
            }
        }
        if (sigma == dim)
            throw IndistinctPoints("separator: fiber points " + std::to_string(j) + " and " +
                                   std::to_string(l) + " coincide within tolerance");
        cvec nu(dim, cplx(0.0)), base(dim, cplx(0.0));
        nu[sigma] = cplx(1.0);
        base[sigma] = fiber_points[l][sigma];
        factors.push_back(HoloFunction::affine_pairing(nu, base));
        norm *= xj[sigma] - fiber_points[l][sigma];
    }
    if (factors.empty()) return HoloFunction::constant(cplx(1.0));
    return HoloFunction::linear_scale(cplx(1.0) / norm, HoloFunction::product(std::move(factors)));
}

HoloPtr pullback_peak(std::shared_ptr<const ProperMap> f, const HoloPtr& psi, const cvec& y,
                      std::size_t fiber_index, int truncation, double r0,
                      const PointSampler& source_samples, const ToleranceProfile& tol) {
    if (truncation < 1) throw DomainViolation("pullback_peak: truncation must be >= 1");
    auto fiber_pts = fiber(*f, y, tol);
    if (fiber_index >= fiber_pts.size())
        throw DomainViolation("pullback_peak: fiber index out of range");
    const cvec& xj = fiber_pts[fiber_index];

    // Singleton fiber: the composition itself already peaks.
    if (fiber_pts.size() == 1) return HoloFunction::compose(psi, f->as_holo());

    HoloPtr phi_sep = separator(fiber_pts, fiber_index, tol);
    HoloPtr psi_f = HoloFunction::compose(psi, f->as_holo());

    auto samples = source_samples(2000, 0xB15);
    std::vector<double> p_abs(samples.size()), s_abs(samples.size()), dist(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        p_abs[i] = std::abs(psi_f->evaluate(samples[i], tol));
        s_abs[i] = std::abs(phi_sep->evaluate(samples[i], tol));
        double d2 = 0.0;
        for (std::size_t c = 0; c < xj.size(); ++c) {
            double dr = std::abs(samples[i][c] - xj[c]);
            d2 += dr * dr;
        }
        dist[i] = std::sqrt(d2);
    }

    for (int shrink = 0;; ++shrink) {
        if (shrink > 40) throw ExponentSearchFailure("pullback_peak: neighborhood shrink stalled");
        bool phi_small_enough = true;
        for (int k = 1; k <= truncation && phi_small_enough; ++k) {
            double rk = r0 * std::ldexp(1.0, -k);
            double cap = 1.0 + std::ldexp(1.0, -k);
            for (std::size_t i = 0; i < samples.size(); ++i)
                if (dist[i] < rk && s_abs[i] > cap) {
                    phi_small_enough = false;
                    break;
                }
        }
        if (phi_small_enough) break;
        r0 /= 2.0;
    }

    std::vector<HoloPtr> terms;
    const double c_norm = 1.0 / (1.0 - std::ldexp(1.0, -truncation));
    for (int k = 1; k <= truncation; ++k) {
        double rk = r0 * std::ldexp(1.0, -k);
        // Minimal exponent pushing the term under 1/4 outside U_k; the term
        // is pointwise nonincreasing in the exponent since |psi o F| <= 1.
        auto term_sup = [&](long long nexp) {
            double worst = 0.0;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                if (dist[i] < rk) continue;
                double v = std::pow(p_abs[i], static_cast<double>(nexp)) * s_abs[i];
                worst = std::max(worst, v);
            }
            return worst;
        };
        long long lo = 1, hi = 1;
        while (term_sup(hi) > 0.25) {
            hi *= 2;
            if (hi > (1LL << 20))
                throw ExponentSearchFailure("pullback_peak: exponent exceeded 2^20 at term " +
                                            std::to_string(k));
        }
        while (lo < hi) {
            long long mid = (lo + hi) / 2;
            if (term_sup(mid) <= 0.25)
                hi = mid;
            else
                lo = mid + 1;
        }
        cplx coeff = c_norm * std::ldexp(1.0, -k);
        terms.push_back(HoloFunction::linear_scale(
            coeff, HoloFunction::product({HoloFunction::int_power(psi_f, lo), phi_sep})));
    }
    // Sum via the first elementary symmetric function of the terms.
    return HoloFunction::compose(HoloFunction::coordinate(1),
                                 HoloFunction::sym_compose(std::move(terms)));
}

std::vector<CfcEntry> cfc_probe(std::shared_ptr<const ProperMap> f, const cvec& w0,
                                const std::vector<cvec>& sequence, int grid,
                                const ToleranceProfile& tol) {
    auto fiber0 = fiber(*f, w0, tol);
    const cvec z0 = fiber0.front();
    std::vector<CfcEntry> out;
    for (std::size_t k = 0; k < sequence.size(); ++k) {
        const cvec& wk = sequence[k];
        CfcEntry entry;
        entry.index = static_cast<int>(k);
        if (wk == w0) {
            out.push_back(entry);
            continue;
        }
        auto fib = fiber(*f, wk, tol);
        const cvec& z = fib.front();
        // Extremal function for the polydisc source: the coordinate Moebius
        // map realizing c*(z0, z).
        std::size_t best_coord = 0;
        double best = -1.0;
        for (std::size_t c = 0; c < z.size(); ++c) {
            double v = mobius_distance(z0[c], z[c]);
            if (v > best) {
                best = v;
                best_coord = c;
            }
        }
        HoloPtr extremal =
            HoloFunction::mobius_coord(z0[best_coord], static_cast<int>(best_coord) + 1);
        HoloPtr g = HoloFunction::fiber_compose(f, extremal);
        cvec g_w0 = g->evaluate_vector(w0, tol);
        cvec g_wk = g->evaluate_vector(wk, tol);
        auto bound = sympoly::carath_lb(g_w0, g_wk, grid, tol);
        entry.lower_bound_mobius = bound.mobius;
        entry.lower_bound_poincare = bound.poincare;
        out.push_back(entry);
    }
    return out;
}

} // namespace peaklab::transfer
