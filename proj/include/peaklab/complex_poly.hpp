#pragma once

#include <complex>
#include <vector>

#include "peaklab/tolerance.hpp"

namespace peaklab {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Elementary symmetric polynomials (e_1, ..., e_n) of the given values,
// computed by the stable incremental product recurrence for prod(t + v_j).
inline cvec elementary_symmetric(const cvec& values) {
    const std::size_t n = values.size();
    cvec e(n + 1, cplx(0.0));
    e[0] = 1.0;
    std::size_t used = 0;
    for (const cplx& v : values) {
        ++used;
        for (std::size_t k = used; k >= 1; --k) e[k] += v * e[k - 1];
    }
    return cvec(e.begin() + 1, e.end());
}

// Monic polynomial t^n + c_{n-1} t^{n-1} + ... + c_0.
// coeffs[k] stores the coefficient of t^k for k = 0..n-1; the leading
// coefficient is implicitly 1.
struct ComplexPoly {
    cvec coeffs;

    explicit ComplexPoly(cvec c) : coeffs(std::move(c)) {
        if (coeffs.empty()) throw DomainViolation("ComplexPoly: degree must be >= 1");
    }

    int degree() const { return static_cast<int>(coeffs.size()); }

    cplx eval(const cplx& t) const {
        cplx acc(1.0);
        for (int k = degree() - 1; k >= 0; --k) acc = acc * t + coeffs[static_cast<std::size_t>(k)];
        return acc;
    }

    cplx deriv_eval(const cplx& t) const {
        const int n = degree();
        cplx acc(static_cast<double>(n));
        for (int k = n - 1; k >= 1; --k)
            acc = acc * t + static_cast<double>(k) * coeffs[static_cast<std::size_t>(k)];
        return acc;
    }

    double max_coeff_magnitude() const {
        double m = 0.0;
        for (const cplx& c : coeffs) m = std::max(m, std::abs(c));
        return m;
    }

    // Monic polynomial with the given roots (test oracle for round trips).
    static ComplexPoly from_roots(const cvec& roots) {
        cvec e = elementary_symmetric(roots);
        const std::size_t n = roots.size();
        cvec c(n, cplx(0.0));
        double sign = -1.0;
        for (std::size_t k = 1; k <= n; ++k) {
            c[n - k] = sign * e[k - 1];
            sign = -sign;
        }
        return ComplexPoly(std::move(c));
    }
};

// All deg(p) roots with multiplicity, by Aberth-Ehrlich simultaneous
// iteration started on a circle of radius 1 + max|coeff| whose angles carry
// a fixed irrational rotation. Sorted by (modulus desc, argument asc).
// `attempt` > 0 perturbs the initialization for retries after NonConvergence.
cvec roots(const ComplexPoly& p, const ToleranceProfile& tol = {}, int attempt = 0);

} // namespace peaklab
