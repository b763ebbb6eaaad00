#pragma once

#include <functional>
#include <memory>

#include "peaklab/holo_function.hpp"
#include "peaklab/sympoly.hpp"

namespace peaklab::transfer {

// Deterministic source-domain sampler used for sampled sup estimation.
using PointSampler = std::function<std::vector<cvec>(int count, std::uint64_t seed)>;

// Proper holomorphic map with computable fibers. The catalog (coordinate
// power maps, the symmetrization, and compositions of these) satisfies the
// extension-with-same-multiplicity hypotheses by inspection.
class ProperMap : public FiberProvider {
public:
    enum class Kind { PowerMap, Symmetrization, Composition };

    static std::shared_ptr<const ProperMap> power_map(std::vector<int> exponents);
    static std::shared_ptr<const ProperMap> symmetrization(int n);
    static std::shared_ptr<const ProperMap>
    composition(std::vector<std::shared_ptr<const ProperMap>> stages); // applied in order

    Kind kind() const { return kind_; }
    int source_dim() const;
    int target_dim() const;
    int multiplicity() const override;

    cvec apply(const cvec& z) const;
    std::vector<cvec> fiber_tuples(const cvec& w) const override;

    // Forward map as an expression tree (power maps of one variable, the
    // symmetrization, compositions of those).
    HoloPtr as_holo() const;

    nlohmann::json describe() const override;
    static std::shared_ptr<const ProperMap> from_json(const nlohmann::json& j);

private:
    ProperMap() = default;
    Kind kind_ = Kind::Symmetrization;
    std::vector<int> exponents_;
    int n_ = 0;
    std::vector<std::shared_ptr<const ProperMap>> stages_;
};

// Fiber of w as the multiset of ordered source tuples (exactly
// multiplicity() of them, counted with multiplicity).
std::vector<cvec> fiber(const ProperMap& f, const cvec& w, const ToleranceProfile& tol = {});

// Forward transfer of a peak function phi at a (Lemma-style): builds
// g = pi_m o (phi x ... x phi) o F^{-1}, peaks the symmetrized polydisc at
// g(b), and returns the composition.
struct TransferResult {
    HoloPtr g;        // FiberCompose node, target -> G_m
    HoloPtr composed; // the transferred peak function on the target
    cvec b;           // F(a)
    cvec g_at_b;      // g(b), a boundary point of G_m
};
TransferResult transfer_peak(std::shared_ptr<const ProperMap> f, const HoloPtr& phi,
                             const cvec& a, const ToleranceProfile& tol = {});

// Normalized separating polynomial for one fiber point against the rest.
HoloPtr separator(const std::vector<cvec>& fiber_points, std::size_t j,
                  const ToleranceProfile& tol = {});

// Truncated Bishop 1/4-3/4 series pulling the target peak psi at y back to
// the fiber point fiber(y)[fiber_index]. Exponents are calibrated by
// sampled sup estimation over the source samples.
HoloPtr pullback_peak(std::shared_ptr<const ProperMap> f, const HoloPtr& psi, const cvec& y,
                      std::size_t fiber_index, int truncation, double r0,
                      const PointSampler& source_samples, const ToleranceProfile& tol = {});

// Caratheodory growth probe along a boundary-approaching target sequence.
// Source catalog: polydiscs, where the extremal function is a coordinate
// Moebius map.
struct CfcEntry {
    int index = 0;
    double lower_bound_mobius = 0.0;
    double lower_bound_poincare = 0.0;
};
std::vector<CfcEntry> cfc_probe(std::shared_ptr<const ProperMap> f, const cvec& w0,
                                const std::vector<cvec>& sequence, int grid,
                                const ToleranceProfile& tol = {});

} // namespace peaklab::transfer
