#pragma once

#include "hausdorff/hankel.hpp"
#include "hausdorff/linalg.hpp"
#include "hausdorff/sequence.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hausdorff {

// A Hausdorff problem instance: the interval [alpha, beta] and tolerances.
class IntervalContext {
public:
    IntervalContext(double alpha, double beta, Tol tol = Tol()) : alpha_(alpha), beta_(beta), tol_(tol) {
        if (!std::isfinite(alpha) || !std::isfinite(beta) || !(alpha < beta))
            throw invalid_input("IntervalContext: need finite alpha < beta");
    }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double width() const { return beta_ - alpha_; }
    const Tol& tol() const { return tol_; }

private:
    double alpha_;
    double beta_;
    Tol tol_;
};

// Extremal endpoints u_j, o_j and the derived deviations, lengths and midpoints.
// A_0 = B_0 = s_0 by convention.
struct EnvelopeData {
    std::vector<CMat> u;
    std::vector<CMat> o;
    std::vector<CMat> A;
    std::vector<CMat> B;
    std::vector<CMat> d;
    std::vector<CMat> m;
};

struct FParams {
    std::vector<CMat> f;
};

struct CanonicalMoments {
    std::vector<CMat> e;
    std::vector<CMat> d;
    std::vector<CMat> P;
    std::vector<Index> rank;  // rank of d_j (equivalently of P_j)
};

inline EnvelopeData envelope(const HermSequence& s, const IntervalContext& ctx) {
    const Tol& tol = ctx.tol();
    const double al = ctx.alpha(), be = ctx.beta();
    const Index q = s.dim(), kappa = s.kappa();
    const CMat Z = linalg::zeros(q, q);
    std::optional<HermSequence> a, b, c;
    if (kappa >= 1) {
        a = shift_a(s, al);
        b = shift_b(s, be);
    }
    if (kappa >= 2) c = shift_c(s, al, be);

    EnvelopeData env;
    for (Index j = 0; j <= kappa; ++j) {
        const Index k = j / 2;
        if (j % 2 == 0) {
            env.u.push_back(al * s[j] + (k == 0 ? Z : theta(*a, k, tol)));
            env.o.push_back(be * s[j] - (k == 0 ? Z : theta(*b, k, tol)));
        } else {
            env.u.push_back(theta(s, k + 1, tol));
            env.o.push_back(-al * be * s[j - 1] + (al + be) * s[j] - (k == 0 ? Z : theta(*c, k, tol)));
        }
    }
    env.A.push_back(s[0]);
    env.B.push_back(s[0]);
    for (Index j = 1; j <= kappa; ++j) {
        env.A.push_back(s[j] - env.u[j - 1]);
        env.B.push_back(env.o[j - 1] - s[j]);
    }
    for (Index j = 0; j <= kappa; ++j) {
        env.d.push_back(env.o[j] - env.u[j]);
        env.m.push_back((env.u[j] + env.o[j]) / 2.0);
    }
    return env;
}

inline FParams f_parametrization(const EnvelopeData& env) {
    FParams p;
    p.f.push_back(env.A[0]);
    for (std::size_t m = 1; m < env.A.size(); ++m) {
        if (m % 2 == 1) {
            p.f.push_back(env.A[m]);
            p.f.push_back(env.B[m]);
        } else {
            p.f.push_back(env.B[m]);
            p.f.push_back(env.A[m]);
        }
    }
    return p;
}

inline FParams f_parametrization(const HermSequence& s, const IntervalContext& ctx) {
    return f_parametrization(envelope(s, ctx));
}

namespace detail {

// Index of the first f_j that is not PSD, or -1 if s lies in F>=.
// A non-Hermitian s_j is reported through its f-parameter index.
inline Index first_F_violation(const HermSequence& s, const FParams& fp, const Tol& tol) {
    for (Index j = 0; j <= s.kappa(); ++j) {
        if (!linalg::is_hermitian(s[j], tol)) return j == 0 ? 0 : 2 * j - 1;
    }
    for (std::size_t j = 0; j < fp.f.size(); ++j)
        if (!linalg::is_psd(fp.f[j], tol)) return static_cast<Index>(j);
    return -1;
}

inline void require_Fgg(const HermSequence& s, const FParams& fp, const Tol& tol, const char* where) {
    const Index bad = first_F_violation(s, fp, tol);
    if (bad >= 0)
        throw domain_error(std::string(where) + ": sequence is not in F>= (f_" + std::to_string(bad) +
                           " is not positive semidefinite)");
}

// Reference magnitude for rank decisions on d_j = o_j - u_j. Roundoff in d_j
// is relative to the endpoints that cancel and to the previous length
// (d_j <= (beta - alpha)/4 d_{j-1}), not to d_j itself.
inline double length_scale(const EnvelopeData& env, double width, std::size_t j) {
    double scale = std::max(linalg::norm2(env.u[j]), linalg::norm2(env.o[j]));
    if (j > 0) scale = std::max(scale, width * linalg::norm2(env.d[j - 1]));
    return scale;
}

inline bool is_idempotent(const CMat& e, const Tol& tol) {
    return (e * e - e).norm() <= tol.eq_abs * std::max(1.0, e.norm());
}

inline bool is_half_projection(const CMat& e, const CMat& P, const Tol& tol) {
    return (e - P / 2.0).norm() <= tol.eq_abs * std::max(1.0, e.norm());
}

}  // namespace detail

inline bool is_Fgg(const HermSequence& s, const IntervalContext& ctx) {
    return detail::first_F_violation(s, f_parametrization(s, ctx), ctx.tol()) < 0;
}

inline bool is_Fg(const HermSequence& s, const IntervalContext& ctx) {
    if (!s.is_hermitian(ctx.tol())) return false;
    for (const auto& f : f_parametrization(s, ctx).f)
        if (!linalg::is_pd(f, ctx.tol())) return false;
    return true;
}

namespace detail {

// d_k = eta sqrt(d_{k-1}) sqrt(e_k) (P_{k-1} - e_k) sqrt(e_k) sqrt(d_{k-1}).
inline CMat length_step(const linalg::PsdFactor& prev, const CMat& e, double eta, const Tol& tol) {
    const CMat r = linalg::psd_factor(e, tol).sqrt;
    return linalg::hermitian_part(eta * prev.sqrt * r * (prev.proj - e) * r * prev.sqrt);
}

// Rank decisions on d_k are made relative to eta |d_{k-1}|, the largest value
// d_k can take, so that roundoff in a collapsed direction is recognized as zero.
inline linalg::PsdFactor length_factor(const CMat& d, const CMat* d_prev, double eta, const Tol& tol) {
    return linalg::psd_factor(d, tol, d_prev ? eta * linalg::norm2(*d_prev) : 0.0);
}

}  // namespace detail

// Builds d_k and P_k from a candidate e-sequence by the length recursion.
// Each e_k (k >= 1) is compressed to range(P_{k-1}) and its spectrum clamped
// into [0, 1]; e_0 is clamped to be PSD. Returns the index of the first e_k
// violating the class conditions by more than the tolerance, or -1.
inline Index e_recursion(const std::vector<CMat>& e_in, double eta, const Tol& tol, CanonicalMoments& out,
                         std::vector<CMat>* sqrt_d = nullptr) {
    out = CanonicalMoments{};
    if (e_in.empty()) throw invalid_input("e_recursion: empty sequence");
    const Index q = e_in.front().rows();
    Index bad = -1;
    linalg::PsdFactor prev;
    for (std::size_t k = 0; k < e_in.size(); ++k) {
        const CMat& e = e_in[k];
        if (e.rows() != q || e.cols() != q) throw invalid_input("e_recursion: inconsistent matrix sizes");
        linalg::require_finite(e, "e_recursion");
        CMat ec, dk;
        if (k == 0) {
            if (bad < 0 && (!linalg::is_hermitian(e, tol) || !linalg::is_psd(e, tol))) bad = 0;
            ec = linalg::clamp_spectrum(e, 0.0, std::numeric_limits<double>::infinity());
            dk = eta * ec;
        } else {
            const CMat& P = prev.proj;
            const CMat eh = linalg::hermitian_part(e);
            const CMat pep = P * eh * P;
            // 0 <= e <= P already forces range(e) into range(P).
            if (bad < 0 && (!linalg::is_hermitian(e, tol) || !linalg::is_psd(eh, tol) || !linalg::is_psd(P - eh, tol)))
                bad = static_cast<Index>(k);
            ec = linalg::hermitian_part(P * linalg::clamp_spectrum(pep, 0.0, 1.0) * P);
            dk = detail::length_step(prev, ec, eta, tol);
        }
        prev = detail::length_factor(dk, k == 0 ? nullptr : &out.d.back(), eta, tol);
        if (sqrt_d) sqrt_d->push_back(prev.sqrt);
        out.e.push_back(linalg::hermitian_part(ec));
        out.d.push_back(dk);
        out.P.push_back(prev.proj);
        out.rank.push_back(prev.rank);
    }
    return bad;
}

inline bool validate_E(const std::vector<CMat>& e, double eta, const Tol& tol) {
    if (e.empty() || eta < 0) return false;
    CanonicalMoments cm;
    return e_recursion(e, eta, tol, cm) < 0;
}

inline bool validate_C(const FParams& fp, double eta, const Tol& tol) {
    const auto& f = fp.f;
    if (f.empty() || f.size() % 2 == 0 || eta < 0) return false;
    for (const auto& x : f)
        if (!linalg::is_hermitian(x, tol) || !linalg::is_psd(x, tol)) return false;
    if (f.size() == 1) return true;
    if (!linalg::approx_equal(eta * f[0], f[1] + f[2], tol)) return false;
    for (std::size_t k = 1; 2 * k + 2 < f.size(); ++k) {
        const CMat lhs = eta * linalg::parallel_sum(f[2 * k - 1], f[2 * k], tol);
        if (!linalg::approx_equal(lhs, f[2 * k + 1] + f[2 * k + 2], tol)) return false;
    }
    return true;
}

// e_j = pinv(sqrt(d_{j-1})) f_{2j} pinv(sqrt(d_{j-1})). The lengths d_j are
// carried along by the length recursion on the computed e's; debug builds
// cross-check them against o_j - u_j and against the parallel-sum formula.
inline CanonicalMoments canonical_moments(const HermSequence& s, const IntervalContext& ctx) {
    const Tol& tol = ctx.tol();
    const double eta = ctx.width();
    const EnvelopeData env = envelope(s, ctx);
    const FParams fp = f_parametrization(env);
    detail::require_Fgg(s, fp, tol, "canonical_moments");

    CanonicalMoments cm;
    linalg::PsdFactor prev;
    for (Index j = 0; j <= s.kappa(); ++j) {
        const std::size_t ju = static_cast<std::size_t>(j);
        // s is in F>=, so the exact e_j lies in [0, P_{j-1}]; roundoff outside
        // that band is clamped away.
        CMat e, dj;
        if (j == 0) {
            e = linalg::clamp_spectrum(fp.f[0], 0.0, std::numeric_limits<double>::infinity());
            dj = eta * e;
        } else {
            e = prev.sqrt_pinv * fp.f[2 * ju] * prev.sqrt_pinv;
            e = linalg::clamp_spectrum(prev.proj * e * prev.proj, 0.0, 1.0);
            e = linalg::hermitian_part(prev.proj * e * prev.proj);
            dj = detail::length_step(prev, e, eta, tol);
        }
#if !defined(NDEBUG) || defined(HAUSDORFF_CHECK_CONSISTENCY)
        {
            const double bound = 10 * tol.eq_abs * std::max(1.0, dj.norm());
            const CMat ps = j == 0 ? CMat(eta * fp.f[0])
                                   : CMat(eta * linalg::parallel_sum(fp.f[2 * ju - 1], fp.f[2 * ju], tol));
            if ((dj - env.d[ju]).norm() > bound || (dj - ps).norm() > bound)
                throw numerical_inconsistency("canonical_moments: d_" + std::to_string(j) +
                                              " disagrees with the envelope or parallel-sum formula");
        }
#endif
        prev = detail::length_factor(dj, j == 0 ? nullptr : &cm.d.back(), eta, tol);
        cm.e.push_back(e);
        cm.d.push_back(dj);
        cm.P.push_back(prev.proj);
        cm.rank.push_back(prev.rank);
    }
    return cm;
}

inline HermSequence from_canonical(const std::vector<CMat>& e, Index q, const IntervalContext& ctx) {
    const Tol& tol = ctx.tol();
    if (e.empty()) throw invalid_input("from_canonical: empty sequence");
    for (const auto& x : e)
        if (x.rows() != q || x.cols() != q) throw invalid_input("from_canonical: matrices must be q x q");
    CanonicalMoments cm;
    std::vector<CMat> sq;
    const Index bad = e_recursion(e, ctx.width(), tol, cm, &sq);
    if (bad >= 0)
        throw domain_error("from_canonical: canonical moment e_" + std::to_string(bad) +
                           " violates 0 <= e_k <= P_{k-1}");

    // f_{2k} = sqrt(d_{k-1}) e_k sqrt(d_{k-1}) and f_{2k-1} = d_{k-1} - f_{2k}.
    auto f_even = [&](std::size_t k) -> CMat { return sq[k - 1] * cm.e[k] * sq[k - 1]; };

    const double al = ctx.alpha();
    std::vector<CMat> s{linalg::hermitian_part(cm.e[0])};
    const Index kappa = static_cast<Index>(e.size()) - 1;
    for (Index j = 1; j <= kappa; ++j) {
        const std::size_t ju = static_cast<std::size_t>(j);
        const HermSequence pre(q, s);
        CMat next;
        if (j % 2 == 0) {
            next = theta(pre, j / 2, tol) + f_even(ju);
        } else {
            const Index k = (j - 1) / 2;
            const CMat f_odd = cm.d[ju - 1] - f_even(ju);
            const CMat th = k == 0 ? linalg::zeros(q, q) : theta(shift_a(pre, al), k, tol);
            next = al * s.back() + th + f_odd;
        }
        s.push_back(linalg::hermitian_part(next));
    }
    return HermSequence(q, std::move(s));
}

struct ExtensionInterval {
    CMat lower;   // u_m
    CMat upper;   // o_m
    CMat length;  // d_m
    CMat mid;     // m_m
};

inline ExtensionInterval extension_interval(const HermSequence& s, const IntervalContext& ctx) {
    const EnvelopeData env = envelope(s, ctx);
    detail::require_Fgg(s, f_parametrization(env), ctx.tol(), "extension_interval");
    return {env.u.back(), env.o.back(), env.d.back(), env.m.back()};
}

// Appends s_{m+1} = u_m + sqrt(d_m) K sqrt(d_m) for 0 <= K <= I.
inline HermSequence extend(const HermSequence& s, const IntervalContext& ctx, const CMat& K) {
    const Tol& tol = ctx.tol();
    const Index q = s.dim();
    if (K.rows() != q || K.cols() != q) throw invalid_input("extend: K must be q x q");
    linalg::require_finite(K, "extend");
    if (!linalg::is_hermitian(K, tol) || !linalg::is_psd(K, tol) ||
        !linalg::loewner_leq(linalg::hermitian_part(K), linalg::identity(q), tol))
        throw domain_error("extend: K must satisfy 0 <= K <= I");
    const EnvelopeData env = envelope(s, ctx);
    detail::require_Fgg(s, f_parametrization(env), tol, "extend");
    const std::size_t m = env.d.size() - 1;
    const CMat r = linalg::psd_factor(linalg::hermitian_part(env.d[m]), tol, detail::length_scale(env, ctx.width(), m)).sqrt;
    return s.appended(linalg::hermitian_part(env.u[m] + r * linalg::hermitian_part(K) * r));
}

inline HermSequence extend(const HermSequence& s, const IntervalContext& ctx, double lambda) {
    return extend(s, ctx, CMat(lambda * linalg::identity(s.dim())));
}

struct Classification {
    std::optional<Index> degenerate_index;  // first k >= 1 with e_k idempotent (d_k = 0)
    std::optional<Index> central_from;      // e_j = P_{j-1}/2 for all k <= j <= kappa
    bool symmetric = false;                 // e_{2k+1} = P_{2k}/2 for all 2k+1 <= kappa
    bool interior = false;
};

inline Classification classify(const CanonicalMoments& cm, bool interior, const Tol& tol) {
    Classification c;
    const Index kappa = static_cast<Index>(cm.e.size()) - 1;
    for (Index k = 1; k <= kappa; ++k) {
        if (detail::is_idempotent(cm.e[static_cast<std::size_t>(k)], tol)) {
            c.degenerate_index = k;
            break;
        }
    }
    for (Index k = kappa; k >= 1; --k) {
        const std::size_t ku = static_cast<std::size_t>(k);
        if (!detail::is_half_projection(cm.e[ku], cm.P[ku - 1], tol)) break;
        c.central_from = k;
    }
    c.symmetric = true;
    for (Index k = 1; k <= kappa; k += 2) {
        const std::size_t ku = static_cast<std::size_t>(k);
        if (!detail::is_half_projection(cm.e[ku], cm.P[ku - 1], tol)) c.symmetric = false;
    }
    c.interior = interior;
    return c;
}

inline Classification classify(const HermSequence& s, const IntervalContext& ctx) {
    return classify(canonical_moments(s, ctx), is_Fg(s, ctx), ctx.tol());
}

struct HankelIdentity {
    char family;  // 'H', 'a', 'b' or 'c'
    Index n;
    Index rank_hankel;
    Index rank_sum;
    double det_hankel;
    double det_product;
    bool agrees;
};

namespace detail {

// Determinant of a Hermitian PSD matrix, taken as 0 when the thresholded
// rank (relative to `scale`) is deficient.
inline double thresholded_det(const CMat& A, const Tol& tol, double scale) {
    if (A.size() == 0) return 1.0;
    if (linalg::rank_tol(A, tol, scale) < A.rows()) return 0.0;
    return linalg::hermitian_eigenvalues(A).prod();
}

}  // namespace detail

// rank and determinant of the four Hankel families against the products of
// the matching Schur complements f_{4k+r}.
inline std::vector<HankelIdentity> det_rank_report(const HermSequence& s, const IntervalContext& ctx) {
    const Tol& tol = ctx.tol();
    const FParams fp = f_parametrization(s, ctx);
    detail::require_Fgg(s, fp, tol, "det_rank_report");
    const Index kappa = s.kappa();
    std::vector<HankelIdentity> out;
    const char names[4] = {'H', 'a', 'b', 'c'};
    for (int r = 0; r < 4; ++r) {
        std::optional<HermSequence> t;
        if (r == 0) t = s;
        if (r == 1 && kappa >= 1) t = shift_a(s, ctx.alpha());
        if (r == 2 && kappa >= 1) t = shift_b(s, ctx.beta());
        if (r == 3 && kappa >= 2) t = shift_c(s, ctx.alpha(), ctx.beta());
        if (!t) continue;
        // The shifted families are formed by cancellation, t_j = sum_i c_i s_{j+i};
        // thresholds are taken relative to the operands sum_i |c_i| |H_n(s_{.+i})|,
        // otherwise a block that vanishes in exact arithmetic looks full rank.
        std::vector<double> coef{1.0};
        if (r == 1) coef = {-ctx.alpha(), 1.0};
        if (r == 2) coef = {ctx.beta(), -1.0};
        if (r == 3) coef = {-ctx.alpha() * ctx.beta(), ctx.alpha() + ctx.beta(), -1.0};
        for (Index n = 0; 2 * n <= t->kappa(); ++n) {
            const CMat H = linalg::hermitian_part(hankel_H(*t, n));
            double operands = 0.0;
            for (std::size_t i = 0; i < coef.size(); ++i)
                operands += std::abs(coef[i]) *
                            linalg::norm2(detail::hankel_block(s, n, static_cast<Index>(i), "det_rank_report"));
            const double scale = std::max(linalg::norm2(H), operands);
            HankelIdentity id{names[r], n, linalg::rank_tol(H, tol, scale), 0, 0.0, 1.0, false};
            id.det_hankel = detail::thresholded_det(H, tol, scale);
            for (Index k = 0; k <= n; ++k) {
                const CMat& f = fp.f[static_cast<std::size_t>(4 * k + r)];
                id.rank_sum += linalg::rank_tol(f, tol, scale);
                id.det_product *= detail::thresholded_det(linalg::hermitian_part(f), tol, scale);
            }
            const double diff = std::abs(id.det_hankel - id.det_product);
            id.agrees = id.rank_hankel == id.rank_sum &&
                        diff <= tol.eq_abs * std::max(std::abs(id.det_hankel), std::abs(id.det_product));
            out.push_back(id);
        }
    }
    return out;
}

struct DetteStudden {
    std::vector<CMat> U;      // U_k = d_{k-1}^+ A_k, stored at index k-1
    std::vector<CMat> V;      // V_k = d_{k-1}^+ B_k
    std::vector<CMat> zeta;   // zeta_1 = U_1, zeta_k = V_{k-1} U_k
    std::vector<CMat> gamma;  // gamma_1 = V_1, gamma_k = U_{k-1} V_k
    // Largest relative residuals of the identities, over all applicable k.
    double commute_residual = 0;   // U_k V_k = V_k U_k
    double length_residual = 0;    // d_j = (b-a)^{j+1} s_0 prod U_l V_l
    double chain_residual = 0;     // (b-a) A_{k-1} zeta_k = A_k and (b-a) B_{k-1} gamma_k = B_k
    double product_residual = 0;   // A_k = (b-a)^k s_0 prod zeta_l, B_k likewise with gamma
};

namespace detail {

inline double rel_residual(const CMat& lhs, const CMat& rhs) {
    const double scale = std::max(lhs.norm(), rhs.norm());
    return scale == 0.0 ? 0.0 : (lhs - rhs).norm() / scale;
}

}  // namespace detail

inline DetteStudden dette_studden(const HermSequence& s, const IntervalContext& ctx) {
    const Tol& tol = ctx.tol();
    if (s.kappa() < 1) throw invalid_input("dette_studden: need kappa >= 1");
    const EnvelopeData env = envelope(s, ctx);
    detail::require_Fgg(s, f_parametrization(env), tol, "dette_studden");
    const double w = ctx.width();
    const Index kappa = s.kappa();

    DetteStudden ds;
    for (Index k = 1; k <= kappa; ++k) {
        const std::size_t ku = static_cast<std::size_t>(k);
        const CMat dp = linalg::psd_factor(linalg::hermitian_part(env.d[ku - 1]), tol,
                                           detail::length_scale(env, ctx.width(), ku - 1))
                            .pinv;
        ds.U.push_back(dp * env.A[ku]);
        ds.V.push_back(dp * env.B[ku]);
        if (k == 1) {
            ds.zeta.push_back(ds.U[0]);
            ds.gamma.push_back(ds.V[0]);
        } else {
            ds.zeta.push_back(ds.V[ku - 2] * ds.U[ku - 1]);
            ds.gamma.push_back(ds.U[ku - 2] * ds.V[ku - 1]);
        }
    }

    using detail::rel_residual;
    CMat prodUV = s[0], prodZ = s[0], prodG = s[0];
    double pw = 1.0;
    for (Index k = 1; k <= kappa; ++k) {
        const std::size_t ku = static_cast<std::size_t>(k);
        const CMat& U = ds.U[ku - 1];
        const CMat& V = ds.V[ku - 1];
        ds.commute_residual = std::max(ds.commute_residual, rel_residual(U * V, V * U));
        pw *= w;
        prodUV = prodUV * U * V;
        prodZ = prodZ * ds.zeta[ku - 1];
        prodG = prodG * ds.gamma[ku - 1];
        ds.chain_residual = std::max(ds.chain_residual, rel_residual(w * env.A[ku - 1] * ds.zeta[ku - 1], env.A[ku]));
        ds.chain_residual = std::max(ds.chain_residual, rel_residual(w * env.B[ku - 1] * ds.gamma[ku - 1], env.B[ku]));
        ds.product_residual = std::max(ds.product_residual, rel_residual(pw * prodZ, env.A[ku]));
        ds.product_residual = std::max(ds.product_residual, rel_residual(pw * prodG, env.B[ku]));
        ds.length_residual = std::max(ds.length_residual, rel_residual(pw * w * prodUV, env.d[ku]));
    }
    ds.length_residual = std::max(ds.length_residual, rel_residual(w * s[0], env.d[0]));
    return ds;
}

}  // namespace hausdorff
