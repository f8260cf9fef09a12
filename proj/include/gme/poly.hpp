#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gme/tensor.hpp"

namespace gme {

/// Univariate real polynomial with coefficients stored in ascending degree.
/// The zero polynomial is the empty coefficient list (degree -1). Exact
/// trailing zeros are trimmed on construction; tiny-but-nonzero leading
/// coefficients are kept and left to the callers, which work with relative
/// thresholds.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(Vec coeffs);
    static Polynomial constant(double c);
    static Polynomial from_roots(std::span<const double> roots, double leading = 1.0);

    /// Degree, -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero(double eps = 0.0) const;
    double coeff(int k) const;
    const Vec& coeffs() const { return c_; }

    double operator()(double t) const;
    double max_abs_coeff() const;
    /// 1 + max |c_i / c_deg|; every real root lies within this radius.
    double cauchy_bound() const;

    Polynomial derivative() const;
    /// Copy with coefficients of magnitude <= eps set to zero, then trimmed.
    Polynomial truncated(double eps) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(double s) const;
    Polynomial operator-() const;

    /// Euclidean division: num = q * den + r with deg r < deg den.
    static void divmod(const Polynomial& num, const Polynomial& den, Polynomial& q,
                       Polynomial& r);

private:
    Vec c_;
};

struct PolyRoot {
    double value = 0.0;
    int multiplicity = 1;
};

/// All real roots >= 0 of p, found by Sturm-sequence sign counting with
/// interval bisection (width 1e-13) followed by Newton polishing. Roots
/// closer than 1e-9 are merged and reported once with summed multiplicity.
/// Every returned root r satisfies
///   |p(r)| <= tol * max|coeff| * (1 + |r|)^deg.
/// Throws DegenerateError on the zero polynomial.
std::vector<PolyRoot> real_roots_nonneg(const Polynomial& p, double tol = 1e-10);

/// Nonnegative values that are roots of both p and q: the two root sets are
/// intersected with positional matching and each match is re-verified by the
/// residual bound in both polynomials. If exactly one input is identically
/// zero, the other's nonnegative roots are returned. Both zero is a
/// DegenerateError (the common root set is the whole half-line).
std::vector<double> common_nonneg_roots(const Polynomial& p, const Polynomial& q,
                                        double tol = 1e-10);

/// Rectangular matrix of polynomials.
class PolyMatrix {
public:
    PolyMatrix(int rows, int cols);
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Polynomial& at(int r, int c) const;
    Polynomial& at(int r, int c);

private:
    int rows_;
    int cols_;
    std::vector<Polynomial> grid_;
};

/// Polynomial in u whose coefficients are polynomials in v.
/// coef[k] multiplies u^k; the leading coefficient of a trimmed instance is
/// not identically zero.
struct PolyInU {
    std::vector<Polynomial> coef;

    int udeg() const { return static_cast<int>(coef.size()) - 1; }
    bool all_zero(double eps = 0.0) const;
    /// Drops leading u-coefficients whose v-polynomials vanish (<= eps).
    PolyInU trimmed(double eps = 0.0) const;
    /// Substitutes v = v0, giving a univariate polynomial in u.
    Polynomial at_v(double v0) const;
    double max_abs_coeff() const;
};

/// Sylvester matrix of f (u-degree p) and g (u-degree q): the
/// (p+q) x (p+q) polynomial matrix whose first q rows carry the shifted
/// coefficients of f in descending u-order and whose last p rows carry the
/// shifted coefficients of g. Its determinant vanishes at v0 exactly when
/// f(., v0) and g(., v0) share a root or both leading coefficients vanish.
/// The declared degrees are taken from the coefficient lists; an identically
/// zero leading coefficient is a degree mismatch and rejected.
PolyMatrix sylvester(const PolyInU& f, const PolyInU& g);

struct DetInfo {
    bool conditioning_warning = false;  // sample magnitudes spanned > 1e12
    double min_abs_sample = 0.0;
    double max_abs_sample = 0.0;
    int degree_bound = 0;
};

/// Determinant of a square polynomial matrix, computed by evaluating the
/// matrix at D+1 Chebyshev points (D = sum of row-wise maximum degrees) on
/// [-1-B, 1+B], where B is the largest entry root bound, followed by Newton
/// interpolation. Coefficients below 1e-10 of the largest are truncated to
/// zero. `window_radius` overrides the node interval half-width: the fit is
/// exact either way, but root recovery is only well conditioned inside the
/// window, so callers chasing roots at a known scale pass their own radius.
Polynomial det_polymatrix(const PolyMatrix& m, DetInfo* info = nullptr,
                          std::optional<double> window_radius = std::nullopt);

}  // namespace gme
