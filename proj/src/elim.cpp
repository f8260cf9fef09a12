#include "gme/elim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gme/errors.hpp"

namespace gme {

namespace {

void require_nonneg_sym(const SymTensor& t, int dim) {
    if (t.dim() != dim) {
        std::ostringstream os;
        os << "elimination branch expects dimension " << dim << ", got " << t.dim();
        throw ValidationError(os.str());
    }
    if (!t.is_nonnegative())
        throw ValidationError("elimination requires a nonnegative tensor");
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

double multinomial(int n, int k1, int k2) {
    return binomial(n, k1) * binomial(n - k1, k2);
}

/// Entry of t at (first, 0 x c0, 1 x c1, 2 x c2); order of the tail is
/// irrelevant by symmetry.
double entry_counts(const SymTensor& t, int first, int c0, int c1, int c2) {
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(t.order()));
    idx.push_back(first);
    idx.insert(idx.end(), static_cast<std::size_t>(c0), 0);
    idx.insert(idx.end(), static_cast<std::size_t>(c1), 1);
    idx.insert(idx.end(), static_cast<std::size_t>(c2), 2);
    return t.at(std::span<const int>(idx));
}

/// Candidate admission: normalize, clamp tiny negative components, polish,
/// residual-check, deduplicate by eigenvector distance.
void admit(const SymTensor& t, Vec x, double admit_tol, std::vector<ZEigenpair>& pairs) {
    const double nrm = vec_norm(x);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return;
    for (double& v : x) v /= nrm;
    for (double& v : x)
        if (v < 0.0 && v > -1e-9) v = 0.0;
    double lambda = contract_full(t, x);
    {
        Vec polished = x;
        double pl = lambda;
        if (refine_eigenpair(t, pl, polished, 30)) {
            bool sign_ok = true;
            for (double v : polished)
                if (v < -1e-9) sign_ok = false;
            if (sign_ok) {
                for (double& v : polished)
                    if (v < 0.0) v = 0.0;
                polished = vec_normalized(std::move(polished));
                x = std::move(polished);
                lambda = contract_full(t, x);
            }
        }
    }
    const double res = eigen_residual(t, lambda, x);
    if (res > admit_tol * std::max(1.0, lambda)) return;
    if (lambda < -admit_tol) return;
    for (ZEigenpair& p : pairs) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = p.x[i] - x[i];
            d2 += d * d;
        }
        if (std::sqrt(d2) <= 1e-8) {
            if (res < p.residual) {
                p.lambda = lambda;
                p.x = x;
                p.residual = res;
            }
            return;
        }
    }
    pairs.push_back(ZEigenpair{lambda, std::move(x), res});
}

bool lex_greater(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

ZSpectrum finish_spectrum(std::vector<ZEigenpair> pairs, bool complete,
                          std::vector<std::string> notes) {
    std::sort(pairs.begin(), pairs.end(), [](const ZEigenpair& a, const ZEigenpair& b) {
        if (std::fabs(a.lambda - b.lambda) > 1e-12) return a.lambda > b.lambda;
        return lex_greater(a.x, b.x);
    });
    ZSpectrum s;
    s.radius = pairs.empty() ? 0.0 : pairs.front().lambda;
    s.pairs = std::move(pairs);
    s.complete = complete;
    s.notes = std::move(notes);
    return s;
}

Vec unit3(double a, double b, double c) {
    Vec v{a, b, c};
    return vec_normalized(std::move(v));
}

/// Pointwise test for an identically vanishing determinant: the matrix is
/// evaluated at a handful of scattered v values and the determinant compared
/// against the Hadamard bound at each point. Interpolated coefficients are
/// useless for this decision once the true determinant is zero, because only
/// noise survives the fit.
bool resultant_identically_zero(const PolyMatrix& mat) {
    const int n = mat.rows();
    static constexpr double probes[] = {0.317, 0.771, 1.23, 1.871, 2.59, 0.083, 3.41};
    std::vector<double> scratch(static_cast<std::size_t>(n) * n);
    for (double v : probes) {
        double hadamard = 1.0;
        for (int r = 0; r < n; ++r) {
            double row_norm2 = 0.0;
            for (int c = 0; c < n; ++c) {
                const double e = mat.at(r, c)(v);
                scratch[static_cast<std::size_t>(r) * n + c] = e;
                row_norm2 += e * e;
            }
            hadamard *= std::sqrt(row_norm2);
        }
        // determinant by partial-pivot elimination
        double det = 1.0;
        std::vector<double> a = scratch;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::fabs(a[static_cast<std::size_t>(r) * n + col]) >
                    std::fabs(a[static_cast<std::size_t>(piv) * n + col]))
                    piv = r;
            const double pv = a[static_cast<std::size_t>(piv) * n + col];
            if (pv == 0.0) {
                det = 0.0;
                break;
            }
            if (piv != col) {
                for (int c = col; c < n; ++c)
                    std::swap(a[static_cast<std::size_t>(piv) * n + c],
                              a[static_cast<std::size_t>(col) * n + c]);
                det = -det;
            }
            det *= a[static_cast<std::size_t>(col) * n + col];
            for (int r = col + 1; r < n; ++r) {
                const double f = a[static_cast<std::size_t>(r) * n + col] /
                                 a[static_cast<std::size_t>(col) * n + col];
                if (f == 0.0) continue;
                for (int c = col; c < n; ++c)
                    a[static_cast<std::size_t>(r) * n + c] -=
                        f * a[static_cast<std::size_t>(col) * n + c];
            }
        }
        if (std::fabs(det) > 1e-10 * std::max(hadamard, 1e-300)) return false;
    }
    return true;
}

}  // namespace

double zeigenvalue_count_bound(int order, int dim) {
    if (order == 2) return static_cast<double>(dim);
    return (std::pow(static_cast<double>(order - 1), dim) - 1.0) /
           static_cast<double>(order - 2);
}

namespace elim_detail {

Polynomial cross_poly_01(const SymTensor& t, int row_a, int row_b) {
    const int m = t.order();
    Vec c(static_cast<std::size_t>(m + 1), 0.0);
    for (int k = 0; k < m; ++k) {
        const double w = binomial(m - 1, k);
        // tail of k ones-in-slot-0 and (m-1-k) in slot 1
        c[static_cast<std::size_t>(k)] += w * entry_counts(t, row_a, k, m - 1 - k, 0);
        c[static_cast<std::size_t>(k + 1)] -= w * entry_counts(t, row_b, k, m - 1 - k, 0);
    }
    return Polynomial(std::move(c));
}

Polynomial restricted_row_01(const SymTensor& t, int row) {
    const int m = t.order();
    Vec c(static_cast<std::size_t>(m), 0.0);
    for (int k = 0; k < m; ++k)
        c[static_cast<std::size_t>(k)] += binomial(m - 1, k) * entry_counts(t, row, k, m - 1 - k, 0);
    return Polynomial(std::move(c));
}

BivarSystem qutrit_uv_system(const SymTensor& t) {
    const int m = t.order();
    const std::size_t stride = static_cast<std::size_t>(m + 1);
    std::vector<Vec> cf(stride + 1, Vec(stride, 0.0));  // cf[iu][iv]
    std::vector<Vec> cg(stride, Vec(stride + 1, 0.0));
    for (int k1 = 0; k1 <= m - 1; ++k1) {
        for (int k2 = 0; k2 + k1 <= m - 1; ++k2) {
            const int k3 = m - 1 - k1 - k2;
            const double w = multinomial(m - 1, k1, k2);
            const double a1 = entry_counts(t, 0, k1, k2, k3);
            const double a2 = entry_counts(t, 1, k1, k2, k3);
            const double a3 = entry_counts(t, 2, k1, k2, k3);
            cf[static_cast<std::size_t>(k1)][static_cast<std::size_t>(k2)] += w * a1;
            cf[static_cast<std::size_t>(k1 + 1)][static_cast<std::size_t>(k2)] -= w * a3;
            cg[static_cast<std::size_t>(k1)][static_cast<std::size_t>(k2)] += w * a2;
            cg[static_cast<std::size_t>(k1)][static_cast<std::size_t>(k2 + 1)] -= w * a3;
        }
    }
    BivarSystem sys;
    for (const Vec& row : cf) sys.f.coef.emplace_back(row);
    for (const Vec& row : cg) sys.g.coef.emplace_back(row);
    sys.f = sys.f.trimmed();
    sys.g = sys.g.trimmed();
    return sys;
}

}  // namespace elim_detail

ZSpectrum qubit_spectrum(const SymTensor& t, double admit_tol) {
    require_nonneg_sym(t, 2);
    if (t.is_zero()) {
        Vec e1(2, 0.0);
        e1[0] = 1.0;
        return finish_spectrum({ZEigenpair{0.0, e1, 0.0}}, true, {});
    }
    std::vector<ZEigenpair> pairs;
    std::vector<std::string> notes;
    bool complete = true;

    admit(t, Vec{1.0, 0.0}, admit_tol, pairs);

    const Polynomial cross = elim_detail::cross_poly_01(t, 0, 1);
    if (cross.is_zero()) {
        notes.push_back(
            "cross-multiplied equation vanished identically: every direction with "
            "x2 > 0 is an eigendirection candidate; admitted representatives only");
        complete = false;
        admit(t, Vec{0.0, 1.0}, admit_tol, pairs);
        admit(t, Vec{1.0, 1.0}, admit_tol, pairs);
    } else {
        for (const PolyRoot& r : real_roots_nonneg(cross)) {
            const double s = std::sqrt(1.0 + r.value * r.value);
            admit(t, Vec{r.value / s, 1.0 / s}, admit_tol, pairs);
        }
    }
    return finish_spectrum(std::move(pairs), complete, std::move(notes));
}

ZSpectrum qutrit_spectrum(const SymTensor& t, double admit_tol) {
    require_nonneg_sym(t, 3);
    if (t.is_zero()) {
        Vec e1(3, 0.0);
        e1[0] = 1.0;
        return finish_spectrum({ZEigenpair{0.0, e1, 0.0}}, true, {});
    }
    std::vector<ZEigenpair> pairs;
    std::vector<std::string> notes;
    bool complete = true;

    // Branch 1: x = (1,0,0) by direct substitution.
    admit(t, Vec{1.0, 0.0, 0.0}, admit_tol, pairs);

    // Branch 2: x3 = 0, x2 > 0.
    {
        const Polynomial cross = elim_detail::cross_poly_01(t, 0, 1);
        const Polynomial plane = elim_detail::restricted_row_01(t, 2);
        if (cross.is_zero() && plane.is_zero()) {
            notes.push_back(
                "x3 = 0 branch is degenerate (both reduced equations vanish); admitted "
                "representatives only, eigenvalue list may be incomplete on that plane");
            complete = false;
            admit(t, unit3(0, 1, 0), admit_tol, pairs);
            admit(t, unit3(1, 1, 0), admit_tol, pairs);
        } else {
            for (double r : common_nonneg_roots(cross, plane)) {
                const double s = std::sqrt(1.0 + r * r);
                admit(t, Vec{r / s, 1.0 / s, 0.0}, admit_tol, pairs);
            }
        }
    }

    // Branch 3: x3 > 0 via the Sylvester resultant in v.
    {
        auto sys = elim_detail::qutrit_uv_system(t);
        const bool fz = sys.f.coef.empty();
        const bool gz = sys.g.coef.empty();
        if (fz && gz) {
            notes.push_back(
                "x3 > 0 branch is degenerate (both cross-multiplied equations vanish); "
                "admitted representatives only");
            complete = false;
            for (const Vec& v :
                 {unit3(0, 0, 1), unit3(1, 0, 1), unit3(0, 1, 1), unit3(1, 1, 1)})
                admit(t, v, admit_tol, pairs);
        } else if (fz || gz) {
            notes.push_back(
                "x3 > 0 branch has a one-parameter candidate family (one cross-multiplied "
                "equation vanished identically); enumeration incomplete");
            complete = false;
            for (const Vec& v :
                 {unit3(0, 0, 1), unit3(1, 0, 1), unit3(0, 1, 1), unit3(1, 1, 1)})
                admit(t, v, admit_tol, pairs);
        } else if (sys.f.udeg() == 0 && sys.g.udeg() == 0) {
            // neither equation involves u: common v-roots leave u free
            notes.push_back(
                "x3 > 0 branch does not constrain x1 (both equations constant in u); "
                "admitted u = 0 and u = 1 representatives per v-root");
            complete = false;
            for (double v0 : common_nonneg_roots(sys.f.coef[0], sys.g.coef[0])) {
                admit(t, unit3(0, v0, 1), admit_tol, pairs);
                admit(t, unit3(1, v0, 1), admit_tol, pairs);
            }
        } else {
            const PolyMatrix mat = sylvester(sys.f, sys.g);
            if (resultant_identically_zero(mat))
                throw DegenerateError(
                    "resultant of the x3 > 0 system is identically zero (the two "
                    "cross-multiplied equations share a polynomial factor): the "
                    "candidate set is not finite and elimination cannot enumerate it");

            // v candidates come from interpolated determinants on a ladder of
            // windows. A single fit on a window sized by the worst entry root
            // bound can span fifteen orders of magnitude and lose every
            // coefficient that matters near the origin; each fit is instead
            // trusted only inside its own window. Within one fit, roots of the
            // first two derivatives with a small |d| value are kept as well,
            // because interpolation noise can split a multiple root into a
            // complex pair with no sign change. Every candidate still has to
            // survive the eigen-residual gate, so over-collecting is harmless.
            std::vector<double> v_candidates;
            auto add_v = [&v_candidates](double v) {
                for (double known : v_candidates)
                    if (std::fabs(known - v) <= 1e-8) return;
                v_candidates.push_back(v);
            };
            auto harvest = [&add_v](const Polynomial& d, double trust) {
                for (const PolyRoot& vr : real_roots_nonneg(d))
                    if (vr.value <= trust) add_v(vr.value);
                const double dscale = d.max_abs_coeff();
                Polynomial deriv = d.derivative();
                for (int level = 0; level < 2 && deriv.degree() >= 1; ++level) {
                    for (const PolyRoot& vr : real_roots_nonneg(deriv)) {
                        if (vr.value > trust) continue;
                        const double gate =
                            1e-6 * dscale *
                            std::pow(1.0 + vr.value, static_cast<double>(d.degree()));
                        if (std::fabs(d(vr.value)) <= gate) add_v(vr.value);
                    }
                    deriv = deriv.derivative();
                }
            };

            double entry_bound = 1.0;
            for (int r = 0; r < mat.rows(); ++r)
                for (int c = 0; c < mat.cols(); ++c)
                    if (mat.at(r, c).degree() >= 1)
                        entry_bound = std::max(entry_bound, mat.at(r, c).cauchy_bound());
            std::vector<double> windows{4.0};
            while (windows.back() < entry_bound + 1.0 && windows.back() < 1e6)
                windows.push_back(windows.back() * 4.0);

            int expansions = 0;
            for (std::size_t wi = 0; wi < windows.size(); ++wi) {
                const Polynomial d = det_polymatrix(mat, nullptr, windows[wi]);
                if (d.is_zero()) continue;
                const bool last = wi + 1 == windows.size();
                harvest(d, last ? std::numeric_limits<double>::infinity() : windows[wi]);
                if (last && expansions < 3) {
                    const double cb = d.cauchy_bound();
                    if (cb > windows.back() * 1.05 && windows.back() < 1e6) {
                        windows.push_back(std::min(cb, windows.back() * 8.0));
                        ++expansions;
                    }
                }
            }
            std::sort(v_candidates.begin(), v_candidates.end());

            const double uv_scale = std::max(sys.f.max_abs_coeff(), sys.g.max_abs_coeff());
            for (const double v0 : v_candidates) {
                const Polynomial fu = sys.f.at_v(v0);
                const Polynomial gu = sys.g.at_v(v0);
                // a v-root carries interpolation error, so near-vanishing is judged
                // generously; every extra candidate dies at the residual gate
                const double vanish =
                    1e-7 * uv_scale * std::pow(1.0 + v0, static_cast<double>(t.order()));
                std::vector<double> us;
                auto add_u = [&us](double u) {
                    for (double known : us)
                        if (std::fabs(known - u) <= 1e-10) return;
                    us.push_back(u);
                };
                // union of both root sets: the residual gate replaces exact
                // intersection, which is brittle under the v-root error
                if (!fu.is_zero())
                    for (const PolyRoot& ur : real_roots_nonneg(fu)) add_u(ur.value);
                if (!gu.is_zero())
                    for (const PolyRoot& ur : real_roots_nonneg(gu)) add_u(ur.value);
                if (fu.is_zero(vanish) && gu.is_zero(vanish)) {
                    notes.push_back(
                        "both equations vanish along a v-root; admitted u = 0 and u = 1 "
                        "representatives");
                    complete = false;
                    add_u(0.0);
                    add_u(1.0);
                }
                for (double u0 : us) admit(t, unit3(u0, v0, 1.0), admit_tol, pairs);
            }
        }
    }

    return finish_spectrum(std::move(pairs), complete, std::move(notes));
}

double radius_elim(const SymTensor& t, double admit_tol) {
    if (t.dim() == 2) return qubit_spectrum(t, admit_tol).radius;
    if (t.dim() == 3) return qutrit_spectrum(t, admit_tol).radius;
    std::ostringstream os;
    os << "elimination handles dimensions 2 and 3 only (got " << t.dim()
       << "); use the shifted power method with restarts";
    throw CapabilityError(os.str());
}

}  // namespace gme
