#include "peaklab/holo_function.hpp"

#include <cmath>
#include <sstream>

namespace peaklab {

using nlohmann::json;

namespace {

cplx parse_cplx(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
    throw InputError("expected complex value as number or [re, im]");
}

json dump_cplx(const cplx& c) { return json::array({c.real(), c.imag()}); }

cvec parse_cvec(const json& j) {
    cvec v;
    for (const auto& e : j) v.push_back(parse_cplx(e));
    return v;
}

json dump_cvec(const cvec& v) {
    json j = json::array();
    for (const cplx& c : v) j.push_back(dump_cplx(c));
    return j;
}

} // namespace

HoloPtr HoloFunction::coordinate(int j) {
    if (j < 1) throw DomainViolation("Coordinate index must be >= 1");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::Coordinate;
    f->index_ = j;
    return f;
}

HoloPtr HoloFunction::constant(cplx c) {
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::Constant;
    f->c_ = c;
    return f;
}

HoloPtr HoloFunction::linear_scale(cplx c, HoloPtr inner) {
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::LinearScale;
    f->c_ = c;
    f->children_ = {std::move(inner)};
    return f;
}

HoloPtr HoloFunction::monomial(cplx c, std::vector<long long> alpha) {
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::Monomial;
    f->c_ = c;
    f->alpha_ = std::move(alpha);
    return f;
}

HoloPtr HoloFunction::fractional_map(int n, cplx lambda) {
    if (n < 2) throw DomainViolation("FractionalMap: n must be >= 2");
    if (std::abs(lambda) > 1.0 + 1e-12)
        throw DomainViolation("FractionalMap: |lambda| must be <= 1");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::FractionalMap;
    f->index_ = n;
    f->c_ = lambda;
    return f;
}

HoloPtr HoloFunction::mobius_atom(cplx a) {
    if (a == cplx(0.0)) throw DomainViolation("MobiusAtom: a must be nonzero");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::MobiusAtom;
    f->c_ = a / std::abs(a);
    return f;
}

HoloPtr HoloFunction::mobius_coord(cplx a, int j) {
    if (std::abs(a) >= 1.0) throw DomainViolation("MobiusCoord: |a| must be < 1");
    if (j < 1) throw DomainViolation("MobiusCoord: coordinate index must be >= 1");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::MobiusCoord;
    f->c_ = a;
    f->index_ = j;
    return f;
}

HoloPtr HoloFunction::exp_inv_log(HoloPtr inner, double diameter) {
    if (diameter <= 0.0) throw DomainViolation("ExpInvLog: diameter must be positive");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::ExpInvLog;
    f->diameter_ = diameter;
    f->children_ = {std::move(inner)};
    return f;
}

HoloPtr HoloFunction::sym_compose(std::vector<HoloPtr> parts) {
    if (parts.empty()) throw DomainViolation("SymCompose: needs at least one function");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::SymCompose;
    f->children_ = std::move(parts);
    return f;
}

HoloPtr HoloFunction::fiber_compose(std::shared_ptr<const FiberProvider> map, HoloPtr inner) {
    if (!map) throw DomainViolation("FiberCompose: map must be non-null");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::FiberCompose;
    f->map_ = std::move(map);
    f->children_ = {std::move(inner)};
    return f;
}

HoloPtr HoloFunction::compose(HoloPtr outer, HoloPtr inner) {
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::Compose;
    f->children_ = {std::move(outer), std::move(inner)};
    return f;
}

HoloPtr HoloFunction::product(std::vector<HoloPtr> parts) {
    if (parts.empty()) throw DomainViolation("Product: needs at least one factor");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::Product;
    f->children_ = std::move(parts);
    return f;
}

HoloPtr HoloFunction::affine_pairing(cvec nu, cvec base) {
    if (nu.size() != base.size())
        throw DomainViolation("AffinePairing: nu and base point must have the same dimension");
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::AffinePairing;
    f->nu_ = std::move(nu);
    f->base_ = std::move(base);
    return f;
}

HoloPtr HoloFunction::int_power(HoloPtr inner, long long exponent) {
    auto f = std::shared_ptr<HoloFunction>(new HoloFunction);
    f->kind_ = Kind::IntPower;
    f->ipow_ = exponent;
    f->children_ = {std::move(inner)};
    return f;
}

namespace {

cplx scalar_of(const cvec& v, const char* who) {
    if (v.size() != 1)
        throw DomainViolation(std::string(who) + ": expected scalar operand, got dimension " +
                              std::to_string(v.size()));
    return v[0];
}

cplx int_pow(cplx base, long long e) {
    if (e == 0) return cplx(1.0);
    if (e < 0) {
        if (base == cplx(0.0)) throw PoleHit("IntPower: zero base with negative exponent");
        return cplx(1.0) / int_pow(base, -e);
    }
    cplx acc(1.0), b = base;
    long long k = e;
    while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

} // namespace

cvec HoloFunction::evaluate_vector(const cvec& z, const ToleranceProfile& tol) const {
    switch (kind_) {
    case Kind::Coordinate: {
        if (static_cast<std::size_t>(index_) > z.size())
            throw DomainViolation("Coordinate: index exceeds point dimension");
        return {z[static_cast<std::size_t>(index_ - 1)]};
    }
    case Kind::Constant:
        return {c_};
    case Kind::LinearScale:
        return {c_ * scalar_of(children_[0]->evaluate_vector(z, tol), "LinearScale")};
    case Kind::Monomial: {
        if (alpha_.size() != z.size())
            throw DomainViolation("Monomial: exponent vector dimension mismatch");
        cplx acc = c_;
        for (std::size_t j = 0; j < alpha_.size(); ++j) {
            if (alpha_[j] == 0) continue;
            if (z[j] == cplx(0.0) && alpha_[j] < 0)
                throw DomainViolation("Monomial: negative exponent at a vanishing coordinate");
            acc *= int_pow(z[j], alpha_[j]);
        }
        return {acc};
    }
    case Kind::FractionalMap: {
        const int n = index_;
        if (z.size() != static_cast<std::size_t>(n))
            throw DomainViolation("FractionalMap: point dimension must equal n");
        cplx denom = cplx(static_cast<double>(n)) + c_ * z[0];
        if (std::abs(denom) <= tol.lp_feas_tol)
            throw PoleHit("FractionalMap: n + lambda*z1 vanished");
        cvec out(static_cast<std::size_t>(n - 1));
        for (int j = 1; j <= n - 1; ++j) {
            cplx num = static_cast<double>(n - j) * z[static_cast<std::size_t>(j - 1)] +
                       c_ * static_cast<double>(j + 1) * z[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(j - 1)] = num / denom;
        }
        return out;
    }
    case Kind::MobiusAtom:
        return {std::conj(c_) * scalar_of(z.size() == 1 ? z : cvec{}, "MobiusAtom")};
    case Kind::MobiusCoord: {
        if (static_cast<std::size_t>(index_) > z.size())
            throw DomainViolation("MobiusCoord: index exceeds point dimension");
        cplx w = z[static_cast<std::size_t>(index_ - 1)];
        cplx denom = cplx(1.0) - std::conj(c_) * w;
        if (std::abs(denom) <= tol.lp_feas_tol) throw PoleHit("MobiusCoord: denominator vanished");
        return {(w - c_) / denom};
    }
    case Kind::ExpInvLog: {
        cplx w = scalar_of(children_[0]->evaluate_vector(z, tol), "ExpInvLog") / diameter_;
        if (w.real() >= 0.0)
            throw BranchViolation("ExpInvLog: argument has nonnegative real part");
        return {std::exp(cplx(1.0) / std::log(w))};
    }
    case Kind::SymCompose: {
        cvec values;
        values.reserve(children_.size());
        for (const HoloPtr& f : children_)
            values.push_back(scalar_of(f->evaluate_vector(z, tol), "SymCompose"));
        return elementary_symmetric(values);
    }
    case Kind::FiberCompose: {
        const auto tuples = map_->fiber_tuples(z);
        cvec values;
        values.reserve(tuples.size());
        for (const cvec& x : tuples)
            values.push_back(scalar_of(children_[0]->evaluate_vector(x, tol), "FiberCompose"));
        return elementary_symmetric(values);
    }
    case Kind::Compose:
        return children_[0]->evaluate_vector(children_[1]->evaluate_vector(z, tol), tol);
    case Kind::Product: {
        cplx acc(1.0);
        for (const HoloPtr& f : children_)
            acc *= scalar_of(f->evaluate_vector(z, tol), "Product");
        return {acc};
    }
    case Kind::AffinePairing: {
        if (z.size() != nu_.size())
            throw DomainViolation("AffinePairing: point dimension mismatch");
        cplx acc(0.0);
        for (std::size_t j = 0; j < nu_.size(); ++j)
            acc += (z[j] - base_[j]) * std::conj(nu_[j]);
        return {acc};
    }
    case Kind::IntPower:
        return {int_pow(scalar_of(children_[0]->evaluate_vector(z, tol), "IntPower"), ipow_)};
    }
    throw DomainViolation("evaluate: unknown node kind");
}

cplx HoloFunction::evaluate(const cvec& z, const ToleranceProfile& tol) const {
    return scalar_of(evaluate_vector(z, tol), "evaluate");
}

json HoloFunction::to_json() const {
    json j;
    switch (kind_) {
    case Kind::Coordinate:
        j = {{"kind", "coordinate"}, {"j", index_}};
        break;
    case Kind::Constant:
        j = {{"kind", "constant"}, {"c", dump_cplx(c_)}};
        break;
    case Kind::LinearScale:
        j = {{"kind", "linear_scale"}, {"c", dump_cplx(c_)}, {"f", children_[0]->to_json()}};
        break;
    case Kind::Monomial:
        j = {{"kind", "monomial"}, {"c", dump_cplx(c_)}, {"alpha", alpha_}};
        break;
    case Kind::FractionalMap:
        j = {{"kind", "fractional_map"}, {"n", index_}, {"lambda", dump_cplx(c_)}};
        break;
    case Kind::MobiusAtom:
        j = {{"kind", "mobius_atom"}, {"a", dump_cplx(c_)}};
        break;
    case Kind::MobiusCoord:
        j = {{"kind", "mobius_coord"}, {"a", dump_cplx(c_)}, {"j", index_}};
        break;
    case Kind::ExpInvLog:
        j = {{"kind", "exp_inv_log"}, {"d", diameter_}, {"f", children_[0]->to_json()}};
        break;
    case Kind::SymCompose: {
        json parts = json::array();
        for (const HoloPtr& f : children_) parts.push_back(f->to_json());
        j = {{"kind", "sym_compose"}, {"parts", parts}};
        break;
    }
    case Kind::FiberCompose:
        j = {{"kind", "fiber_compose"}, {"map", map_->describe()},
             {"f", children_[0]->to_json()}};
        break;
    case Kind::Compose:
        j = {{"kind", "compose"}, {"outer", children_[0]->to_json()},
             {"inner", children_[1]->to_json()}};
        break;
    case Kind::Product: {
        json parts = json::array();
        for (const HoloPtr& f : children_) parts.push_back(f->to_json());
        j = {{"kind", "product"}, {"parts", parts}};
        break;
    }
    case Kind::AffinePairing:
        j = {{"kind", "affine_pairing"}, {"nu", dump_cvec(nu_)}, {"a", dump_cvec(base_)}};
        break;
    case Kind::IntPower:
        j = {{"kind", "int_power"}, {"n", ipow_}, {"f", children_[0]->to_json()}};
        break;
    }
    return j;
}

HoloPtr HoloFunction::from_json(const json& j, const FiberResolver& resolver) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "coordinate") return coordinate(j.at("j").get<int>());
    if (kind == "constant") return constant(parse_cplx(j.at("c")));
    if (kind == "linear_scale")
        return linear_scale(parse_cplx(j.at("c")), from_json(j.at("f"), resolver));
    if (kind == "monomial")
        return monomial(parse_cplx(j.at("c")), j.at("alpha").get<std::vector<long long>>());
    if (kind == "fractional_map")
        return fractional_map(j.at("n").get<int>(), parse_cplx(j.at("lambda")));
    if (kind == "mobius_atom") return mobius_atom(parse_cplx(j.at("a")));
    if (kind == "mobius_coord") return mobius_coord(parse_cplx(j.at("a")), j.at("j").get<int>());
    if (kind == "exp_inv_log")
        return exp_inv_log(from_json(j.at("f"), resolver), j.at("d").get<double>());
    if (kind == "sym_compose" || kind == "product") {
        std::vector<HoloPtr> parts;
        for (const auto& e : j.at("parts")) parts.push_back(from_json(e, resolver));
        return kind == "sym_compose" ? sym_compose(std::move(parts)) : product(std::move(parts));
    }
    if (kind == "fiber_compose") {
        if (!resolver) throw InputError("fiber_compose node needs a map resolver");
        return fiber_compose(resolver(j.at("map")), from_json(j.at("f"), resolver));
    }
    if (kind == "compose")
        return compose(from_json(j.at("outer"), resolver), from_json(j.at("inner"), resolver));
    if (kind == "affine_pairing")
        return affine_pairing(parse_cvec(j.at("nu")), parse_cvec(j.at("a")));
    if (kind == "int_power")
        return int_power(from_json(j.at("f"), resolver), j.at("n").get<long long>());
    throw InputError("unknown HoloFunction node kind: " + kind);
}

std::string HoloFunction::fingerprint() const {
    const std::string s = to_json().dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace peaklab
