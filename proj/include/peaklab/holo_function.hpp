#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "peaklab/complex_poly.hpp"
#include "peaklab/tolerance.hpp"

namespace peaklab {

// Fiber access for FiberCompose nodes. Implemented by transfer::ProperMap;
// kept abstract here so the expression tree does not depend on the map
// catalog.
class FiberProvider {
public:
    virtual ~FiberProvider() = default;
    virtual int multiplicity() const = 0;
    // The m fiber tuples over w (with multiplicity), each a point of the
    // source space.
    virtual std::vector<cvec> fiber_tuples(const cvec& w) const = 0;
    virtual nlohmann::json describe() const = 0;
};

class HoloFunction;
using HoloPtr = std::shared_ptr<const HoloFunction>;

// Immutable expression tree for the constructed holomorphic functions.
// Scalar-valued at the root for evaluate(); FractionalMap / SymCompose /
// FiberCompose nodes are vector-valued internally and feed Compose.
class HoloFunction {
public:
    enum class Kind {
        Coordinate,   // z_j (1-based)
        Constant,     // c
        LinearScale,  // c * f(z)
        Monomial,     // c * z^alpha, alpha integer (Laurent allowed)
        FractionalMap,// p_{n,lambda} : C^n -> C^{n-1}
        MobiusAtom,   // conj(a/|a|) * w, scalar input
        MobiusCoord,  // (z_j - a) / (1 - conj(a) z_j), |a| < 1
        ExpInvLog,    // exp(1 / Log(f(z) / d)), principal branch
        SymCompose,   // pi_m(f_1(z), ..., f_m(z))
        FiberCompose, // pi_m({f(x) : x in fiber(F, z)})
        Compose,      // outer(inner(z))
        Product,      // f_1(z) * ... * f_k(z)
        AffinePairing,// <z - a, nu> = sum (z_i - a_i) conj(nu_i)
        IntPower,     // f(z)^n, n integer (negative = reciprocal power)
    };

    static HoloPtr coordinate(int j);
    static HoloPtr constant(cplx c);
    static HoloPtr linear_scale(cplx c, HoloPtr f);
    static HoloPtr monomial(cplx c, std::vector<long long> alpha);
    static HoloPtr fractional_map(int n, cplx lambda);
    static HoloPtr mobius_atom(cplx a);
    static HoloPtr mobius_coord(cplx a, int j);
    static HoloPtr exp_inv_log(HoloPtr inner, double diameter);
    static HoloPtr sym_compose(std::vector<HoloPtr> parts);
    static HoloPtr fiber_compose(std::shared_ptr<const FiberProvider> map, HoloPtr inner);
    static HoloPtr compose(HoloPtr outer, HoloPtr inner);
    static HoloPtr product(std::vector<HoloPtr> parts);
    static HoloPtr affine_pairing(cvec nu, cvec base);
    static HoloPtr int_power(HoloPtr inner, long long exponent);

    Kind kind() const { return kind_; }

    // Full (possibly vector-valued) evaluation.
    cvec evaluate_vector(const cvec& z, const ToleranceProfile& tol = {}) const;

    // Scalar evaluation; DomainViolation if the tree is vector-valued.
    cplx evaluate(const cvec& z, const ToleranceProfile& tol = {}) const;

    nlohmann::json to_json() const;

    using FiberResolver =
        std::function<std::shared_ptr<const FiberProvider>(const nlohmann::json&)>;
    static HoloPtr from_json(const nlohmann::json& j, const FiberResolver& resolver = {});

    // FNV-1a hash of the canonical JSON form, as a hex string.
    std::string fingerprint() const;

private:
    HoloFunction() = default;

    Kind kind_ = Kind::Constant;
    cplx c_{};                       // Constant / LinearScale / Monomial / Mobius*
    int index_ = 0;                  // Coordinate / MobiusCoord / FractionalMap n
    double diameter_ = 0.0;          // ExpInvLog
    long long ipow_ = 0;             // IntPower
    std::vector<long long> alpha_;   // Monomial
    cvec nu_, base_;                 // AffinePairing
    std::vector<HoloPtr> children_;  // composite nodes
    std::shared_ptr<const FiberProvider> map_; // FiberCompose
};

inline cplx evaluate(const HoloPtr& f, const cvec& z, const ToleranceProfile& tol = {}) {
    return f->evaluate(z, tol);
}

} // namespace peaklab
