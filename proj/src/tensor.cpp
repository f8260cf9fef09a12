#include "gme/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include "gme/errors.hpp"

namespace gme {

namespace {

constexpr std::size_t kMaxDenseEntries = std::size_t(1) << 27;

void decode_index(std::size_t lin, int dim, std::span<int> out) {
    for (int k = static_cast<int>(out.size()) - 1; k >= 0; --k) {
        out[k] = static_cast<int>(lin % dim);
        lin /= dim;
    }
}

std::size_t encode_index(std::span<const int> idx, int dim) {
    std::size_t lin = 0;
    for (int v : idx) lin = lin * dim + static_cast<std::size_t>(v);
    return lin;
}

std::string index_string_1based(std::span<const int> idx) {
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k] + 1;
    os << ")";
    return os.str();
}

void check_finite(std::span<const double> e) {
    for (double v : e)
        if (!std::isfinite(v)) throw ValidationError("tensor entries must be finite");
}

/// Product vector over all `count`-tuples of {0..n-1}: p[tuple] = prod x[i_k],
/// row-major with the first tuple position outermost.
Vec tuple_products(std::span<const double> x, int count) {
    Vec prod{1.0};
    const int n = static_cast<int>(x.size());
    for (int k = 0; k < count; ++k) {
        Vec next(prod.size() * static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < prod.size(); ++j)
            for (int i = 0; i < n; ++i) next[j * n + i] = prod[j] * x[i];
        prod = std::move(next);
    }
    return prod;
}

bool irreducible_square(std::span<const double> e, int n, int m) {
    if (n > 20)
        throw CapabilityError(
            "irreducibility test enumerates 2^n - 2 index subsets and is capped at "
            "dimension 20; run the power method anyway and treat the result as "
            "lacking a reducibility check");
    const std::size_t tail = dense_size(n, m - 1);
    std::vector<std::vector<std::uint32_t>> row_masks(static_cast<std::size_t>(n));
    std::vector<int> digits(static_cast<std::size_t>(m - 1));
    for (int i = 0; i < n; ++i) {
        std::set<std::uint32_t> masks;
        for (std::size_t lin = 0; lin < tail; ++lin) {
            if (e[static_cast<std::size_t>(i) * tail + lin] == 0.0) continue;
            decode_index(lin, n, digits);
            std::uint32_t mask = 0;
            for (int d : digits) mask |= (1u << d);
            masks.insert(mask);
        }
        row_masks[static_cast<std::size_t>(i)].assign(masks.begin(), masks.end());
    }
    const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
    for (std::uint32_t subset = 1; subset < full; ++subset) {
        bool witnesses_reducibility = true;
        for (int i = 0; i < n && witnesses_reducibility; ++i) {
            if (!((subset >> i) & 1u)) continue;
            for (std::uint32_t mask : row_masks[static_cast<std::size_t>(i)]) {
                if ((mask & subset) == 0u) {
                    // row i has a nonzero entry fully supported outside the subset
                    witnesses_reducibility = false;
                    break;
                }
            }
        }
        if (witnesses_reducibility) return false;
    }
    return true;
}

}  // namespace

std::size_t dense_size(int dim, int order) {
    if (dim < 1 || order < 1) throw ValidationError("tensor dimensions must be positive");
    std::size_t r = 1;
    for (int i = 0; i < order; ++i) {
        if (r > kMaxDenseEntries / static_cast<std::size_t>(dim))
            throw ValidationError("tensor is too large for dense storage");
        r *= static_cast<std::size_t>(dim);
    }
    return r;
}

double vec_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double vec_norm(std::span<const double> a) { return std::sqrt(vec_dot(a, a)); }

Vec vec_normalized(Vec v) {
    const double n = vec_norm(v);
    if (!(n > 0.0) || !std::isfinite(n))
        throw ValidationError("cannot normalize a zero or non-finite vector");
    for (double& x : v) x /= n;
    return v;
}

SymTensor::SymTensor(int order, int dim, Vec entries)
    : order_(order), dim_(dim), e_(std::move(entries)) {
    if (order_ < 2) throw ValidationError("symmetric tensor order must be at least 2");
    if (dim_ < 2) throw ValidationError("symmetric tensor dimension must be at least 2");
    const std::size_t want = dense_size(dim_, order_);
    if (e_.size() != want) {
        std::ostringstream os;
        os << "entry array has length " << e_.size() << ", expected " << want;
        throw ValidationError(os.str());
    }
    check_finite(e_);
    double scale = 0.0;
    for (double v : e_) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-12 * std::max(1.0, scale);
    std::vector<int> idx(static_cast<std::size_t>(order_));
    std::vector<int> rep(static_cast<std::size_t>(order_));
    for (std::size_t lin = 0; lin < e_.size(); ++lin) {
        decode_index(lin, dim_, idx);
        rep = idx;
        std::sort(rep.begin(), rep.end());
        if (rep == idx) continue;
        const std::size_t rl = encode_index(rep, dim_);
        if (std::fabs(e_[lin] - e_[rl]) > tol) {
            std::ostringstream os;
            os << "tensor is not symmetric: entry at " << index_string_1based(idx)
               << " is " << e_[lin] << " but the representative at "
               << index_string_1based(rep) << " is " << e_[rl];
            throw ValidationError(os.str());
        }
        e_[lin] = e_[rl];
    }
}

SymTensor SymTensor::zeros(int order, int dim) {
    return SymTensor(order, dim, Vec(dense_size(dim, order), 0.0));
}

double SymTensor::at(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != order_)
        throw ValidationError("index tuple length does not match tensor order");
    for (int v : idx)
        if (v < 0 || v >= dim_) throw ValidationError("index out of range");
    return e_[encode_index(idx, dim_)];
}

double SymTensor::at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
}

double SymTensor::max_abs() const {
    double s = 0.0;
    for (double v : e_) s = std::max(s, std::fabs(v));
    return s;
}

bool SymTensor::is_nonnegative() const {
    for (double v : e_)
        if (v < 0.0) return false;
    return true;
}

GenTensor::GenTensor(std::vector<int> dims, Vec entries)
    : dims_(std::move(dims)), e_(std::move(entries)) {
    if (dims_.empty()) throw ValidationError("tensor needs at least one mode");
    std::size_t want = 1;
    for (int d : dims_) {
        if (d < 1) throw ValidationError("mode dimensions must be positive");
        if (want > kMaxDenseEntries / static_cast<std::size_t>(d))
            throw ValidationError("tensor is too large for dense storage");
        want *= static_cast<std::size_t>(d);
    }
    if (e_.size() != want) {
        std::ostringstream os;
        os << "entry array has length " << e_.size() << ", expected " << want;
        throw ValidationError(os.str());
    }
    check_finite(e_);
}

GenTensor GenTensor::zeros(std::vector<int> dims) {
    std::size_t want = 1;
    for (int d : dims) want *= static_cast<std::size_t>(std::max(d, 1));
    return GenTensor(std::move(dims), Vec(want, 0.0));
}

double GenTensor::at(std::span<const int> idx) const {
    if (idx.size() != dims_.size())
        throw ValidationError("index tuple length does not match tensor order");
    std::size_t lin = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= dims_[k]) throw ValidationError("index out of range");
        lin = lin * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(idx[k]);
    }
    return e_[lin];
}

double GenTensor::at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
}

double GenTensor::max_abs() const {
    double s = 0.0;
    for (double v : e_) s = std::max(s, std::fabs(v));
    return s;
}

bool GenTensor::is_nonnegative() const {
    for (double v : e_)
        if (v < 0.0) return false;
    return true;
}

Vec contract_power(const SymTensor& t, std::span<const double> x, int copies) {
    if (static_cast<int>(x.size()) != t.dim()) {
        std::ostringstream os;
        os << "dimension mismatch: tensor dimension " << t.dim() << ", vector length "
           << x.size();
        throw ValidationError(os.str());
    }
    if (copies < 0 || copies > t.order())
        throw ValidationError("number of contracted indices out of range");
    const Vec prod = tuple_products(x, copies);
    const std::size_t block = prod.size();
    const std::size_t out_size = dense_size(t.dim(), t.order()) / block;
    Vec out(out_size, 0.0);
    const auto e = t.entries();
    for (std::size_t i = 0; i < out_size; ++i) {
        const double* row = e.data() + i * block;
        double s = 0.0;
        for (std::size_t j = 0; j < block; ++j) s += row[j] * prod[j];
        out[i] = s;
    }
    return out;
}

double contract_full(const SymTensor& t, std::span<const double> x) {
    return contract_power(t, x, t.order())[0];
}

Vec contract_once(const SymTensor& t, std::span<const double> x) {
    return contract_power(t, x, t.order() - 1);
}

double contract_full(const GenTensor& a, const std::vector<Vec>& xs) {
    const auto& dims = a.dims();
    if (xs.size() != dims.size())
        throw ValidationError("one contraction vector per mode is required");
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<int>(xs[k].size()) != dims[k]) {
            std::ostringstream os;
            os << "dimension mismatch at mode " << k + 1 << ": expected " << dims[k]
               << ", got " << xs[k].size();
            throw ValidationError(os.str());
        }
    }
    Vec buf(a.entries().begin(), a.entries().end());
    std::size_t size = buf.size();
    for (int k = a.order() - 1; k >= 0; --k) {
        const int len = dims[static_cast<std::size_t>(k)];
        const std::size_t outer = size / static_cast<std::size_t>(len);
        const Vec& xk = xs[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < outer; ++i) {
            double s = 0.0;
            const double* row = buf.data() + i * static_cast<std::size_t>(len);
            for (int j = 0; j < len; ++j) s += row[j] * xk[static_cast<std::size_t>(j)];
            buf[i] = s;
        }
        size = outer;
    }
    return buf[0];
}

Vec contract_all_but_mode(const GenTensor& a, const std::vector<Vec>& xs, int mode) {
    const auto& dims = a.dims();
    const int m = a.order();
    if (mode < 0 || mode >= m) throw ValidationError("mode index out of range");
    if (xs.size() != dims.size())
        throw ValidationError("one contraction vector per mode is required");
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<int>(k) == mode) continue;
        if (static_cast<int>(xs[k].size()) != dims[k]) {
            std::ostringstream os;
            os << "dimension mismatch at mode " << k + 1 << ": expected " << dims[k]
               << ", got " << xs[k].size();
            throw ValidationError(os.str());
        }
    }
    Vec out(static_cast<std::size_t>(dims[static_cast<std::size_t>(mode)]), 0.0);
    const auto e = a.entries();
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    for (std::size_t lin = 0; lin < e.size(); ++lin) {
        if (e[lin] != 0.0) {
            double w = e[lin];
            for (int k = 0; k < m; ++k)
                if (k != mode) w *= xs[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
            out[static_cast<std::size_t>(idx[static_cast<std::size_t>(mode)])] += w;
        }
        // odometer increment
        for (int k = m - 1; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    return out;
}

double frobenius_norm(std::span<const double> entries) {
    double s = 0.0;
    for (double v : entries) s += v * v;
    return std::sqrt(s);
}

double frobenius_norm(const SymTensor& t) { return frobenius_norm(t.entries()); }
double frobenius_norm(const GenTensor& a) { return frobenius_norm(a.entries()); }

bool is_irreducible(const SymTensor& t) {
    return irreducible_square(t.entries(), t.dim(), t.order());
}

bool is_irreducible(const GenTensor& a) {
    const auto& dims = a.dims();
    for (int d : dims)
        if (d != dims[0])
            throw ValidationError("irreducibility is defined for tensors with equal mode dimensions");
    return irreducible_square(a.entries(), dims[0], a.order());
}

SymTensor symmetric_embedding(const GenTensor& a) {
    const int m = a.order();
    if (m < 3) throw CapabilityError("symmetric embedding requires order at least 3");
    const auto& dims = a.dims();
    int total = 0;
    std::vector<int> offset(dims.size(), 0);
    for (std::size_t k = 0; k < dims.size(); ++k) {
        offset[k] = total;
        total += dims[k];
    }
    Vec out(dense_size(total, m), 0.0);
    const auto e = a.entries();
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    std::vector<int> perm(static_cast<std::size_t>(m));
    for (std::size_t lin = 0; lin < e.size(); ++lin) {
        if (e[lin] != 0.0) {
            for (int k = 0; k < m; ++k) perm[static_cast<std::size_t>(k)] = k;
            do {
                std::size_t dest = 0;
                for (int p = 0; p < m; ++p) {
                    const int block = perm[static_cast<std::size_t>(p)];
                    const int digit = offset[static_cast<std::size_t>(block)] +
                                      idx[static_cast<std::size_t>(block)];
                    dest = dest * static_cast<std::size_t>(total) + static_cast<std::size_t>(digit);
                }
                out[dest] = e[lin];
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        for (int k = m - 1; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    return SymTensor(m, total, std::move(out));
}

double eigen_residual(const SymTensor& t, double lambda, std::span<const double> x) {
    Vec w = contract_once(t, x);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = w[i] - lambda * x[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double singular_residual(const GenTensor& a, double sigma, const std::vector<Vec>& xs) {
    double worst = 0.0;
    for (int k = 0; k < a.order(); ++k) {
        Vec v = contract_all_but_mode(a, xs, k);
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double d = v[i] - sigma * xs[static_cast<std::size_t>(k)][i];
            s += d * d;
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

ZEigenpair make_eigenpair(const SymTensor& t, Vec x) {
    x = vec_normalized(std::move(x));
    ZEigenpair p;
    p.lambda = contract_full(t, x);
    p.residual = eigen_residual(t, p.lambda, x);
    p.x = std::move(x);
    return p;
}

namespace {

// Solves the dense (n x n) system in place; returns false when singular.
bool solve_dense(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[static_cast<std::size_t>(r) * n + col]) >
                std::fabs(a[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        if (a[static_cast<std::size_t>(piv) * n + col] == 0.0) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
            std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
        }
        const double d = a[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<std::size_t>(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -=
                    f * a[static_cast<std::size_t>(col) * n + c];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c)
            s -= a[static_cast<std::size_t>(r) * n + c] * b[static_cast<std::size_t>(c)];
        b[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r) * n + r];
    }
    return true;
}

}  // namespace

bool refine_eigenpair(const SymTensor& t, double& lambda, Vec& x, int max_steps) {
    const int n = t.dim();
    const int m = t.order();
    Vec cur = vec_normalized(x);
    double cur_lambda = lambda;
    double best_res = eigen_residual(t, cur_lambda, cur);
    Vec best_x = cur;
    double best_lambda = cur_lambda;
    const double initial = best_res;

    // The residual may rise for a step or two before dropping, and near
    // boundary eigenvectors (zero components) the convergence is linear
    // rather than quadratic, so the loop runs its full budget and keeps the
    // best iterate seen.
    const int dim = n + 1;
    for (int step = 0; step < max_steps; ++step) {
        Vec w = contract_once(t, cur);
        Vec jac_core = contract_power(t, cur, m - 2);  // n x n entries of T x^{m-2}
        std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
        std::vector<double> rhs(static_cast<std::size_t>(dim), 0.0);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c)
                a[static_cast<std::size_t>(r) * dim + c] =
                    (m - 1) * jac_core[static_cast<std::size_t>(r) * n + c] -
                    (r == c ? cur_lambda : 0.0);
            a[static_cast<std::size_t>(r) * dim + n] = -cur[static_cast<std::size_t>(r)];
            rhs[static_cast<std::size_t>(r)] =
                -(w[static_cast<std::size_t>(r)] - cur_lambda * cur[static_cast<std::size_t>(r)]);
        }
        for (int c = 0; c < n; ++c)
            a[static_cast<std::size_t>(n) * dim + c] = cur[static_cast<std::size_t>(c)];
        rhs[static_cast<std::size_t>(n)] = -0.5 * (vec_dot(cur, cur) - 1.0);
        if (!solve_dense(a, rhs, dim)) break;
        double step_norm = 0.0;
        for (int r = 0; r < n; ++r) {
            cur[static_cast<std::size_t>(r)] += rhs[static_cast<std::size_t>(r)];
            step_norm += rhs[static_cast<std::size_t>(r)] * rhs[static_cast<std::size_t>(r)];
        }
        cur_lambda += rhs[static_cast<std::size_t>(n)];
        const double nn = vec_norm(cur);
        if (!(nn > 0.0) || !std::isfinite(nn)) break;
        for (double& v : cur) v /= nn;
        const double res = eigen_residual(t, cur_lambda, cur);
        if (res < best_res) {
            best_res = res;
            best_x = cur;
            best_lambda = cur_lambda;
        }
        if (res <= 1e-15 * std::max(1.0, std::fabs(cur_lambda))) break;
        if (std::sqrt(step_norm) <= 1e-16) break;
    }
    x = std::move(best_x);
    lambda = best_lambda;
    return best_res < initial;
}

}  // namespace gme
