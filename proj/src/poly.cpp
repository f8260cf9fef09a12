#include "gme/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gme/errors.hpp"

namespace gme {

namespace {

void trim_exact_zeros(Vec& c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
}

}  // namespace

Polynomial::Polynomial(Vec coeffs) : c_(std::move(coeffs)) {
    for (double v : c_)
        if (!std::isfinite(v)) throw ValidationError("polynomial coefficients must be finite");
    trim_exact_zeros(c_);
}

Polynomial Polynomial::constant(double c) { return Polynomial(Vec{c}); }

Polynomial Polynomial::from_roots(std::span<const double> roots, double leading) {
    Vec c{leading};
    for (double r : roots) {
        Vec next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return Polynomial(std::move(c));
}

bool Polynomial::is_zero(double eps) const {
    for (double v : c_)
        if (std::fabs(v) > eps) return false;
    return true;
}

double Polynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
    return c_[static_cast<std::size_t>(k)];
}

double Polynomial::operator()(double t) const {
    double s = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) s = s * t + c_[i];
    return s;
}

double Polynomial::max_abs_coeff() const {
    double s = 0.0;
    for (double v : c_) s = std::max(s, std::fabs(v));
    return s;
}

double Polynomial::cauchy_bound() const {
    if (c_.empty()) throw DegenerateError("no root bound for the zero polynomial");
    const double lead = std::fabs(c_.back());
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < c_.size(); ++i)
        worst = std::max(worst, std::fabs(c_[i]) / lead);
    return 1.0 + worst;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    Vec d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::truncated(double eps) const {
    Vec c = c_;
    for (double& v : c)
        if (std::fabs(v) <= eps) v = 0.0;
    trim_exact_zeros(c);
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Vec c(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Vec c(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] -= o.c_[i];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (c_.empty() || o.c_.empty()) return Polynomial();
    Vec c(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(double s) const {
    Vec c = c_;
    for (double& v : c) v *= s;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

void Polynomial::divmod(const Polynomial& num, const Polynomial& den, Polynomial& q,
                        Polynomial& r) {
    if (den.c_.empty()) throw ValidationError("polynomial division by zero");
    const int dn = num.degree();
    const int dd = den.degree();
    if (dn < dd) {
        q = Polynomial();
        r = num;
        return;
    }
    Vec rem = num.c_;
    Vec qq(static_cast<std::size_t>(dn - dd + 1), 0.0);
    const double lead = den.c_.back();
    for (int k = dn - dd; k >= 0; --k) {
        const double f = rem[static_cast<std::size_t>(k + dd)] / lead;
        qq[static_cast<std::size_t>(k)] = f;
        if (f != 0.0) {
            for (int j = 0; j < dd; ++j)
                rem[static_cast<std::size_t>(k + j)] -= f * den.c_[static_cast<std::size_t>(j)];
        }
        rem[static_cast<std::size_t>(k + dd)] = 0.0;
    }
    rem.resize(static_cast<std::size_t>(std::max(dd, 0)));
    q = Polynomial(std::move(qq));
    r = Polynomial(std::move(rem));
}

// ---------------------------------------------------------------------------
// Root isolation
// ---------------------------------------------------------------------------

namespace {

// Generalized Sturm chain p, p', -rem(...), terminating at (a multiple of)
// gcd(p, p'); sign-change differences count distinct real roots on half-open
// intervals even in the presence of multiple roots. Every element is
// rescaled to unit max-coefficient, which preserves signs.
struct SturmChain {
    std::vector<Polynomial> seq;

    int sign_changes(double x) const {
        int changes = 0;
        int prev = 0;
        for (const auto& p : seq) {
            const double v = p(x);
            const int s = (v > 0.0) - (v < 0.0);
            if (s != 0) {
                if (prev != 0 && s != prev) ++changes;
                prev = s;
            }
        }
        return changes;
    }
};

Polynomial unit_scaled(const Polynomial& p) {
    const double m = p.max_abs_coeff();
    return (m > 0.0) ? p * (1.0 / m) : p;
}

SturmChain build_chain(const Polynomial& p) {
    SturmChain chain;
    chain.seq.push_back(unit_scaled(p));
    Polynomial d = p.derivative();
    if (d.is_zero()) return chain;
    chain.seq.push_back(unit_scaled(d));
    while (true) {
        const Polynomial& a = chain.seq[chain.seq.size() - 2];
        const Polynomial& b = chain.seq.back();
        Polynomial q, r;
        Polynomial::divmod(a, b, q, r);
        r = (-r).truncated(1e-13 * std::max(1.0, r.max_abs_coeff()));
        if (r.is_zero()) break;
        chain.seq.push_back(unit_scaled(r));
        if (chain.seq.back().degree() == 0) break;
    }
    return chain;
}

struct Isolated {
    double value;
    int cluster;  // number of distinct chain roots merged into this value
};

void isolate(const SturmChain& chain, double a, double b, int ca, int cb, int depth,
             double width_target, std::vector<Isolated>& out) {
    const int count = ca - cb;
    if (count <= 0) return;
    const double width = b - a;
    if ((count == 1 && width <= width_target) || depth > 160 ||
        width <= 1e-15 * std::max({1.0, std::fabs(a), std::fabs(b)})) {
        out.push_back({0.5 * (a + b), count});
        return;
    }
    double mid = 0.5 * (a + b);
    if (chain.seq.front()(mid) == 0.0) mid += width * 1e-3;
    const int cm = chain.sign_changes(mid);
    isolate(chain, a, mid, ca, cm, depth + 1, width_target, out);
    isolate(chain, mid, b, cm, cb, depth + 1, width_target, out);
}

double newton_polish(const Polynomial& p, const Polynomial& dp, double r, double lo,
                     double hi) {
    double best = r;
    double best_abs = std::fabs(p(r));
    double cur = r;
    for (int it = 0; it < 60; ++it) {
        const double f = p(cur);
        const double fp = dp(cur);
        if (fp == 0.0) break;
        const double step = f / fp;
        const double next = cur - step;
        if (!std::isfinite(next) || next < lo || next > hi) break;
        cur = next;
        const double cur_abs = std::fabs(p(cur));
        if (cur_abs < best_abs) {
            best_abs = cur_abs;
            best = cur;
        }
        if (std::fabs(step) <= 1e-17 * (1.0 + std::fabs(cur))) break;
    }
    return best;
}

int estimate_multiplicity(const Polynomial& p, double r) {
    const int deg = p.degree();
    const double scale = p.max_abs_coeff();
    Polynomial d = p;
    double fact = 1.0;
    for (int j = 1; j <= deg; ++j) {
        d = d.derivative();
        fact *= j;
        const double bound = 1e-6 * scale * fact * std::pow(1.0 + std::fabs(r),
                                                            static_cast<double>(deg - j));
        if (std::fabs(d(r)) > bound) return j;
    }
    return std::max(deg, 1);
}

}  // namespace

std::vector<PolyRoot> real_roots_nonneg(const Polynomial& p, double tol) {
    if (p.is_zero())
        throw DegenerateError(
            "polynomial is identically zero: its root set is the whole line and the "
            "caller must handle the degenerate branch");
    const double scale = p.max_abs_coeff();
    Polynomial work = p * (1.0 / scale);

    // Strip an exact t^k factor; 0 is then a root of multiplicity k.
    int zero_mult = 0;
    {
        Vec c = work.coeffs();
        std::size_t k = 0;
        while (k < c.size() && c[k] == 0.0) ++k;
        if (k > 0) {
            zero_mult = static_cast<int>(k);
            c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k));
            work = Polynomial(std::move(c));
        }
    }

    std::vector<PolyRoot> roots;
    if (zero_mult > 0) roots.push_back({0.0, zero_mult});

    if (work.degree() >= 1) {
        const double bound = work.cauchy_bound();
        const double lo = -1e-14 * (1.0 + bound);
        const double hi = bound * (1.0 + 1e-12) + 1e-14;
        const SturmChain chain = build_chain(work);
        const int c_lo = chain.sign_changes(lo);
        const int c_hi = chain.sign_changes(hi);
        std::vector<Isolated> isolated;
        const double width_target = std::max(1e-13, 1e-15 * bound);
        isolate(chain, lo, hi, c_lo, c_hi, 0, width_target, isolated);

        const Polynomial dwork = work.derivative();
        for (const Isolated& iso : isolated) {
            const double halo = std::max(width_target, 1e-9 * (1.0 + std::fabs(iso.value)));
            double r = newton_polish(work, dwork, iso.value, iso.value - halo, iso.value + halo);
            if (r < -1e-12 * (1.0 + bound)) continue;
            r = std::max(r, 0.0);
            int mult = estimate_multiplicity(work, r);
            mult = std::max(mult, iso.cluster);
            roots.push_back({r, mult});
        }
    }

    std::sort(roots.begin(), roots.end(),
              [](const PolyRoot& a, const PolyRoot& b) { return a.value < b.value; });

    // Merge near-coincident roots.
    std::vector<PolyRoot> merged;
    for (const PolyRoot& r : roots) {
        if (!merged.empty() && r.value - merged.back().value <= 1e-9) {
            merged.back().multiplicity += r.multiplicity;
        } else {
            merged.push_back(r);
        }
    }

    // Soundness gate: certified residual bound on the original polynomial.
    std::vector<PolyRoot> out;
    const int deg = p.degree();
    for (const PolyRoot& r : merged) {
        const double bound =
            tol * scale * std::pow(1.0 + std::fabs(r.value), static_cast<double>(deg));
        if (std::fabs(p(r.value)) <= bound) out.push_back(r);
    }
    return out;
}

std::vector<double> common_nonneg_roots(const Polynomial& p, const Polynomial& q,
                                        double tol) {
    const bool pz = p.is_zero();
    const bool qz = q.is_zero();
    if (pz && qz)
        throw DegenerateError(
            "both polynomials are identically zero: every nonnegative value is a "
            "common root (degenerate branch)");
    std::vector<double> out;
    if (pz || qz) {
        for (const PolyRoot& r : real_roots_nonneg(pz ? q : p, tol)) out.push_back(r.value);
        return out;
    }
    const auto rp = real_roots_nonneg(p, tol);
    const auto rq = real_roots_nonneg(q, tol);
    const double sp = p.max_abs_coeff();
    const double sq = q.max_abs_coeff();
    for (const PolyRoot& a : rp) {
        for (const PolyRoot& b : rq) {
            const double match = std::max(tol, 1e-9) * (1.0 + std::fabs(a.value));
            if (std::fabs(a.value - b.value) > match) continue;
            const double r = 0.5 * (a.value + b.value);
            const double bp =
                tol * sp * std::pow(1.0 + std::fabs(r), static_cast<double>(p.degree()));
            const double bq =
                tol * sq * std::pow(1.0 + std::fabs(r), static_cast<double>(q.degree()));
            if (std::fabs(p(r)) <= bp && std::fabs(q(r)) <= bq) {
                out.push_back(r);
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial matrices
// ---------------------------------------------------------------------------

PolyMatrix::PolyMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows_ < 1 || cols_ < 1) throw ValidationError("polynomial matrix must be nonempty");
    grid_.resize(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_));
}

const Polynomial& PolyMatrix::at(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw ValidationError("polynomial matrix index out of range");
    return grid_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(c)];
}

Polynomial& PolyMatrix::at(int r, int c) {
    return const_cast<Polynomial&>(static_cast<const PolyMatrix&>(*this).at(r, c));
}

bool PolyInU::all_zero(double eps) const {
    for (const Polynomial& p : coef)
        if (!p.is_zero(eps)) return false;
    return true;
}

PolyInU PolyInU::trimmed(double eps) const {
    PolyInU out = *this;
    while (!out.coef.empty() && out.coef.back().is_zero(eps)) out.coef.pop_back();
    return out;
}

Polynomial PolyInU::at_v(double v0) const {
    Vec c(coef.size(), 0.0);
    for (std::size_t k = 0; k < coef.size(); ++k) c[k] = coef[k](v0);
    return Polynomial(std::move(c));
}

double PolyInU::max_abs_coeff() const {
    double s = 0.0;
    for (const Polynomial& p : coef) s = std::max(s, p.max_abs_coeff());
    return s;
}

PolyMatrix sylvester(const PolyInU& f, const PolyInU& g) {
    if (f.coef.empty() || g.coef.empty())
        throw ValidationError("sylvester: inputs must be nonzero in the eliminated variable");
    if (f.coef.back().is_zero() || g.coef.back().is_zero())
        throw ValidationError(
            "sylvester: leading coefficient is identically zero, declared degree "
            "does not match the actual degree");
    const int p = f.udeg();
    const int q = g.udeg();
    if (p + q < 1)
        throw ValidationError("sylvester: both inputs are constant in the eliminated variable");
    PolyMatrix m(p + q, p + q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j <= p; ++j) m.at(i, i + j) = f.coef[static_cast<std::size_t>(p - j)];
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= q; ++j)
            m.at(q + i, i + j) = g.coef[static_cast<std::size_t>(q - j)];
    return m;
}

namespace {

double scalar_det(std::vector<double>& a, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[static_cast<std::size_t>(r) * n + col]) >
                std::fabs(a[static_cast<std::size_t>(piv) * n + col]))
                piv = r;
        const double pv = a[static_cast<std::size_t>(piv) * n + col];
        if (pv == 0.0) return 0.0;
        if (piv != col) {
            for (int c = col; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
            det = -det;
        }
        det *= a[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double fct = a[static_cast<std::size_t>(r) * n + col] /
                               a[static_cast<std::size_t>(col) * n + col];
            if (fct == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -=
                    fct * a[static_cast<std::size_t>(col) * n + c];
        }
    }
    return det;
}

}  // namespace

Polynomial det_polymatrix(const PolyMatrix& m, DetInfo* info,
                          std::optional<double> window_radius) {
    if (m.rows() != m.cols()) throw ValidationError("determinant requires a square matrix");
    const int n = m.rows();

    int degree_bound = 0;
    double root_bound = 1.0;
    for (int r = 0; r < n; ++r) {
        int row_deg = -1;
        for (int c = 0; c < n; ++c) {
            const Polynomial& e = m.at(r, c);
            row_deg = std::max(row_deg, e.degree());
            if (e.degree() >= 1) root_bound = std::max(root_bound, e.cauchy_bound());
        }
        if (row_deg < 0) {
            // a whole row is zero
            if (info) *info = DetInfo{};
            return Polynomial();
        }
        degree_bound += row_deg;
    }
    const int samples = degree_bound + 1;
    const double radius = window_radius.value_or(1.0 + root_bound);
    if (!(radius > 0.0)) throw ValidationError("interpolation window must be positive");

    Vec xs(static_cast<std::size_t>(samples));
    Vec ys(static_cast<std::size_t>(samples));
    double min_abs = 0.0, max_abs = 0.0;
    bool have_nonzero = false;
    std::vector<double> scratch(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int j = 0; j < samples; ++j) {
        const double theta =
            std::numbers::pi * (2.0 * j + 1.0) / (2.0 * static_cast<double>(samples));
        const double x = radius * std::cos(theta);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                scratch[static_cast<std::size_t>(r) * n + c] = m.at(r, c)(x);
        const double y = scalar_det(scratch, n);
        xs[static_cast<std::size_t>(j)] = x;
        ys[static_cast<std::size_t>(j)] = y;
        const double ay = std::fabs(y);
        if (ay > 0.0) {
            if (!have_nonzero) {
                min_abs = max_abs = ay;
                have_nonzero = true;
            } else {
                min_abs = std::min(min_abs, ay);
                max_abs = std::max(max_abs, ay);
            }
        }
    }

    // Newton divided differences, then conversion to the monomial basis.
    Vec dd = ys;
    for (int k = 1; k < samples; ++k)
        for (int j = samples - 1; j >= k; --j)
            dd[static_cast<std::size_t>(j)] =
                (dd[static_cast<std::size_t>(j)] - dd[static_cast<std::size_t>(j - 1)]) /
                (xs[static_cast<std::size_t>(j)] - xs[static_cast<std::size_t>(j - k)]);

    Vec coeffs(static_cast<std::size_t>(samples), 0.0);
    Vec basis{1.0};  // prod_{j<k} (x - x_j)
    for (int k = 0; k < samples; ++k) {
        for (std::size_t i = 0; i < basis.size(); ++i)
            coeffs[i] += dd[static_cast<std::size_t>(k)] * basis[i];
        if (k + 1 < samples) {
            Vec next(basis.size() + 1, 0.0);
            for (std::size_t i = 0; i < basis.size(); ++i) {
                next[i + 1] += basis[i];
                next[i] -= xs[static_cast<std::size_t>(k)] * basis[i];
            }
            basis = std::move(next);
        }
    }

    if (info) {
        info->degree_bound = degree_bound;
        info->min_abs_sample = have_nonzero ? min_abs : 0.0;
        info->max_abs_sample = max_abs;
        info->conditioning_warning = have_nonzero && max_abs / min_abs > 1e12;
    }

    double largest = 0.0;
    for (double v : coeffs) largest = std::max(largest, std::fabs(v));
    return Polynomial(std::move(coeffs)).truncated(1e-10 * largest);
}

}  // namespace gme
