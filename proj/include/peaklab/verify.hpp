#pragma once

#include <string>

#include "peaklab/domain_spec.hpp"
#include "peaklab/holo_function.hpp"

namespace peaklab::cli {

// The peak verification protocol: value at the target within tolerance of 1,
// strict |f| < 1 on every interior sample, positive margin off the target
// neighborhood. Reports embed everything needed for a bit-exact re-run.
struct VerificationReport {
    cvec target;
    std::string fingerprint;
    cplx value_at_target{0.0};
    double sampled_sup_interior = 0.0;
    double margin_off_neighborhood = 0.0;
    double neighborhood_radius = 0.1;
    int interior_samples = 10000;
    std::uint64_t seed = 0;
    ToleranceProfile tol;
    bool pass = false;
    std::string failure_cause;
    nlohmann::json domain;   // embedded domain spec
    nlohmann::json function; // embedded expression tree

    nlohmann::json to_json() const;
};

// The sweep may run on several threads; the reduction is max/and over
// per-chunk results, so the report is bit-identical for any thread count.
VerificationReport verify_peak(const HoloPtr& f, const cvec& a, const DomainSpec& domain,
                               int interior_count = 10000, double radius = 0.1,
                               std::uint64_t seed = 0xF00D, const ToleranceProfile& tol = {},
                               int threads = 1);

// Re-run a report from its embedded seed/spec; true iff every number
// reproduces exactly.
bool reverify(const nlohmann::json& report, const HoloFunction::FiberResolver& resolver,
              std::string* diagnostic = nullptr);

// CSV sweep of sampled |f| values: one row per sample, re/im per coordinate
// followed by abs_value. UTF-8, LF, header row.
void write_samples_csv(const std::string& path, const HoloPtr& f, const DomainSpec& domain,
                       int count, std::uint64_t seed, const ToleranceProfile& tol = {});

} // namespace peaklab::cli
