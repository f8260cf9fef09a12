#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gme/errors.hpp"

namespace gme {

using Vec = std::vector<double>;

/// dim^order with an overflow/size guard.
std::size_t dense_size(int dim, int order);

double vec_dot(std::span<const double> a, std::span<const double> b);
double vec_norm(std::span<const double> a);
/// Returns v / ||v||; throws ValidationError on (near-)zero input.
Vec vec_normalized(Vec v);

/// Dense order-m, dimension-n real symmetric tensor.
///
/// Entries are stored as the full n^m array in row-major order (the first
/// index has the largest stride). The constructor verifies that the input is
/// symmetric to within 1e-12 of the entry scale and rejects violations; it
/// then copies the sorted-index representative into every orbit position so
/// lookups are exactly permutation invariant. Indices are 0-based in code
/// and 1-based in file formats and error messages.
class SymTensor {
public:
    SymTensor(int order, int dim, Vec entries);
    static SymTensor zeros(int order, int dim);

    int order() const noexcept { return order_; }
    int dim() const noexcept { return dim_; }
    std::span<const double> entries() const noexcept { return e_; }

    double at(std::span<const int> idx) const;
    double at(std::initializer_list<int> idx) const;

    double max_abs() const;
    bool is_zero() const { return max_abs() == 0.0; }
    /// True iff every entry is >= 0.
    bool is_nonnegative() const;

private:
    int order_;
    int dim_;
    Vec e_;
};

/// Dense d1 x ... x dm real tensor, no symmetry assumed.
class GenTensor {
public:
    GenTensor(std::vector<int> dims, Vec entries);
    static GenTensor zeros(std::vector<int> dims);

    int order() const noexcept { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const noexcept { return dims_; }
    std::span<const double> entries() const noexcept { return e_; }

    double at(std::span<const int> idx) const;
    double at(std::initializer_list<int> idx) const;

    double max_abs() const;
    bool is_zero() const { return max_abs() == 0.0; }
    bool is_nonnegative() const;

private:
    std::vector<int> dims_;
    Vec e_;
};

/// Entries of T x^copies, i.e. the order-(m - copies) tensor obtained by
/// contracting `copies` indices of T against x. copies = m gives the scalar
/// T x^m (as a length-1 vector), copies = m-1 the usual vector T x^{m-1}.
Vec contract_power(const SymTensor& t, std::span<const double> x, int copies);

/// Full contraction T x^m.
double contract_full(const SymTensor& t, std::span<const double> x);

/// The vector T x^{m-1}: i-th entry sums t[i, i2..im] * x[i2] ... x[im].
Vec contract_once(const SymTensor& t, std::span<const double> x);

/// Full multilinear contraction A x^(1) ... x^(m), one vector per mode.
double contract_full(const GenTensor& a, const std::vector<Vec>& xs);

/// Contraction over every mode except `mode` (0-based); xs[mode] is ignored.
/// Result has length dims[mode].
Vec contract_all_but_mode(const GenTensor& a, const std::vector<Vec>& xs, int mode);

double frobenius_norm(const SymTensor& t);
double frobenius_norm(const GenTensor& a);
double frobenius_norm(std::span<const double> entries);

/// Chang-Pearson-Zhang irreducibility: T is reducible iff some nonempty
/// proper index set I has t[i1, i2..im] = 0 for every i1 in I and every
/// i2..im outside I. Decided by enumerating all 2^n - 2 subsets; capped at
/// n <= 20 (CapabilityError beyond, advising the power method instead).
bool is_irreducible(const SymTensor& t);
/// Same test for a general tensor; requires all mode dimensions equal.
bool is_irreducible(const GenTensor& a);

/// Symmetric embedding of an order-m tensor A: the order-m symmetric tensor
/// of dimension N = sum(d_k) that places a[i1..im] at every index tuple
/// visiting each mode block exactly once. Block k occupies the index range
/// [off_k, off_k + d_k). Satisfies S y^m = m! * A y^(1) ... y^(m) for block
/// vectors y = (y^(1); ...; y^(m)). Requires m >= 3.
SymTensor symmetric_embedding(const GenTensor& a);

/// A Z-eigenpair candidate: T x^{m-1} = lambda x with ||x|| = 1; residual
/// is ||T x^{m-1} - lambda x||.
struct ZEigenpair {
    double lambda = 0.0;
    Vec x;
    double residual = 0.0;
};

/// A singular tuple: sigma together with one unit vector per mode; residual
/// is the largest mode-wise defect ||A x^(1)..skip k..x^(m) - sigma x^(k)||.
struct SingularTuple {
    double sigma = 0.0;
    std::vector<Vec> vectors;
    double residual = 0.0;
    std::string note;
};

double eigen_residual(const SymTensor& t, double lambda, std::span<const double> x);
double singular_residual(const GenTensor& a, double sigma, const std::vector<Vec>& xs);

/// Builds the eigenpair determined by direction x: normalizes x, sets
/// lambda = T x^m and computes the residual.
ZEigenpair make_eigenpair(const SymTensor& t, Vec x);

/// A few damped Newton steps on the stationarity system
///   [ T x^{m-1} - lambda x ; (x'x - 1)/2 ] = 0.
/// Keeps the best iterate by residual; returns true if the residual
/// improved. Used to polish eigenpairs produced by elimination roots or by
/// the power method down to machine precision.
bool refine_eigenpair(const SymTensor& t, double& lambda, Vec& x, int max_steps = 30);

}  // namespace gme
