#pragma once

#include <string>
#include <vector>

#include "gme/poly.hpp"
#include "gme/tensor.hpp"

namespace gme {

/// The set of Z-eigenpairs of a nonnegative symmetric tensor that have
/// nonnegative eigenvectors, produced by variable elimination. Pairs are
/// sorted by descending eigenvalue (ties: lexicographically larger vector
/// first). `complete` is true when the enumeration covers the whole
/// nonnegative sphere; it is cleared (with a note) when a degenerate branch
/// admitted representatives of a solution continuum only.
struct ZSpectrum {
    std::vector<ZEigenpair> pairs;
    double radius = 0.0;
    bool complete = false;
    std::vector<std::string> notes;
};

/// Largest admissible count of Z-eigenvalues of an order-m, dimension-n
/// symmetric tensor: ((m-1)^n - 1) / (m - 2), read as n at m = 2.
double zeigenvalue_count_bound(int order, int dim);

/// All nonnegative Z-eigenpairs of a nonnegative symmetric 2-dimensional
/// tensor. The branch x = (1,0) is checked by direct substitution; the
/// branch x2 > 0 reduces to the nonnegative roots of the degree-m
/// cross-multiplication polynomial in t = x1/x2. Every candidate is
/// admitted only after verifying ||T x^{m-1} - lambda x|| <= admit_tol *
/// max(1, lambda).
ZSpectrum qubit_spectrum(const SymTensor& t, double admit_tol = 1e-8);

/// All nonnegative Z-eigenpairs of a nonnegative symmetric 3-dimensional
/// tensor via three branches: x = (1,0,0) by substitution; x3 = 0, x2 > 0 by
/// a common-root computation in t = x1/x2; x3 > 0 by a Sylvester resultant
/// in v = x2/x3 with back-substitution for u = x1/x3. Candidates are
/// residual-verified as in qubit_spectrum.
ZSpectrum qutrit_spectrum(const SymTensor& t, double admit_tol = 1e-8);

/// Z-spectral radius by elimination; dimension 2 or 3 only
/// (CapabilityError otherwise, pointing at the power method).
double radius_elim(const SymTensor& t, double admit_tol = 1e-8);

namespace elim_detail {

/// Cross-multiplication polynomial of rows `row_a` and `row_b` restricted to
/// indices {0,1}: P(t) = [x2 * row_a(x) - x1 * row_b(x)] / x2^m with
/// t = x1/x2. Degree at most m.
Polynomial cross_poly_01(const SymTensor& t, int row_a, int row_b);

/// Row `row` restricted to indices {0,1}, divided by x2^{m-1}; degree at
/// most m-1.
Polynomial restricted_row_01(const SymTensor& t, int row);

struct BivarSystem {
    PolyInU f;  // [x3 * row1 - x1 * row3] / x3^m, u-degree <= m
    PolyInU g;  // [x3 * row2 - x2 * row3] / x3^m, u-degree <= m-1
};

/// The two cross-multiplied equations of the x3 != 0 branch, as polynomials
/// in u = x1/x3 with coefficients polynomial in v = x2/x3. The returned
/// parts are trimmed to their true u-degrees.
BivarSystem qutrit_uv_system(const SymTensor& t);

}  // namespace elim_detail

}  // namespace gme
