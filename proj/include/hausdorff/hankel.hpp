#pragma once

#include "hausdorff/linalg.hpp"
#include "hausdorff/sequence.hpp"

#include <string>
#include <vector>

namespace hausdorff {

inline HermSequence shift_a(const HermSequence& s, double alpha) {
    if (s.kappa() < 1) throw invalid_input("shift_a: need kappa >= 1");
    std::vector<CMat> a;
    for (Index j = 0; j + 1 <= s.kappa(); ++j) a.push_back(-alpha * s[j] + s[j + 1]);
    return HermSequence(s.dim(), std::move(a));
}

inline HermSequence shift_b(const HermSequence& s, double beta) {
    if (s.kappa() < 1) throw invalid_input("shift_b: need kappa >= 1");
    std::vector<CMat> b;
    for (Index j = 0; j + 1 <= s.kappa(); ++j) b.push_back(beta * s[j] - s[j + 1]);
    return HermSequence(s.dim(), std::move(b));
}

inline HermSequence shift_c(const HermSequence& s, double alpha, double beta) {
    if (s.kappa() < 2) throw invalid_input("shift_c: need kappa >= 2");
    std::vector<CMat> c;
    for (Index j = 0; j + 2 <= s.kappa(); ++j)
        c.push_back(-alpha * beta * s[j] + (alpha + beta) * s[j + 1] - s[j + 2]);
    return HermSequence(s.dim(), std::move(c));
}

namespace detail {

inline CMat hankel_block(const HermSequence& s, Index n, Index offset, const char* name) {
    if (n < 0 || 2 * n + offset > s.kappa())
        throw invalid_input(std::string(name) + ": index out of range");
    const Index q = s.dim();
    CMat H(q * (n + 1), q * (n + 1));
    for (Index j = 0; j <= n; ++j)
        for (Index k = 0; k <= n; ++k) H.block(j * q, k * q, q, q) = s[j + k + offset];
    return H;
}

}  // namespace detail

inline CMat hankel_H(const HermSequence& s, Index n) { return detail::hankel_block(s, n, 0, "hankel_H"); }
inline CMat hankel_K(const HermSequence& s, Index n) { return detail::hankel_block(s, n, 1, "hankel_K"); }
inline CMat hankel_G(const HermSequence& s, Index n) { return detail::hankel_block(s, n, 2, "hankel_G"); }

// Block column (s_l; ...; s_m).
inline CMat y_block(const HermSequence& s, Index l, Index m) {
    if (l < 0 || l > m || m > s.kappa()) throw invalid_input("y_block: index out of range");
    const Index q = s.dim();
    CMat y(q * (m - l + 1), q);
    for (Index j = l; j <= m; ++j) y.block((j - l) * q, 0, q, q) = s[j];
    return y;
}

// Block row (s_l, ..., s_m).
inline CMat z_block(const HermSequence& s, Index l, Index m) {
    if (l < 0 || l > m || m > s.kappa()) throw invalid_input("z_block: index out of range");
    const Index q = s.dim();
    CMat z(q, q * (m - l + 1));
    for (Index j = l; j <= m; ++j) z.block(0, (j - l) * q, q, q) = s[j];
    return z;
}

// Theta_n alone; defined whenever 2n - 1 <= kappa.
inline CMat theta(const HermSequence& s, Index n, const Tol& tol) {
    if (n < 0 || 2 * n - 1 > s.kappa()) throw invalid_input("theta: index out of range");
    if (n == 0) return linalg::zeros(s.dim(), s.dim());
    return linalg::pinv_product(z_block(s, n, 2 * n - 1), hankel_H(s, n - 1), y_block(s, n, 2 * n - 1), tol);
}

struct LambdaFamily {
    CMat Theta;
    CMat Sigma;
    CMat M;
    CMat N;
    CMat Lambda;
};

inline LambdaFamily lambda_family(const HermSequence& s, Index n, const Tol& tol) {
    if (n < 0 || 2 * n > s.kappa()) throw invalid_input("lambda_family: index out of range");
    const Index q = s.dim();
    if (n == 0) {
        const CMat Z = linalg::zeros(q, q);
        return {Z, Z, Z, Z, Z};
    }
    const linalg::PinvFactors F = linalg::pinv_factors(hankel_H(s, n - 1), tol);
    const CMat zl = F.left(z_block(s, n, 2 * n - 1));
    const CMat yr = F.right(y_block(s, n, 2 * n - 1));
    LambdaFamily L;
    L.Theta = zl * yr;
    L.Sigma = zl * F.right(hankel_K(s, n - 1) * F.V) * F.inv_sv.asDiagonal() * yr;
    L.M = zl * F.right(y_block(s, n + 1, 2 * n));
    L.N = F.left(z_block(s, n + 1, 2 * n)) * yr;
    L.Lambda = L.M + L.N - L.Sigma;
    return L;
}

struct HankelParams {
    std::vector<CMat> h;
};

inline HankelParams hankel_parametrization(const HermSequence& s, const Tol& tol) {
    HankelParams p;
    for (Index j = 0; j <= s.kappa(); ++j) {
        if (j % 2 == 0)
            p.h.push_back(s[j] - theta(s, j / 2, tol));
        else
            p.h.push_back(s[j] - lambda_family(s, (j - 1) / 2, tol).Lambda);
    }
    return p;
}

struct StieltjesParams {
    std::vector<CMat> kappa;
    double alpha;
};

inline StieltjesParams stieltjes_parametrization(const HermSequence& s, double alpha, const Tol& tol) {
    StieltjesParams p{{}, alpha};
    const Index q = s.dim();
    for (Index j = 0; j <= s.kappa(); ++j) {
        if (j % 2 == 0) {
            p.kappa.push_back(s[j] - theta(s, j / 2, tol));
        } else {
            const Index k = (j - 1) / 2;
            const HermSequence a = shift_a(s.prefix(j), alpha);
            const CMat th = k == 0 ? linalg::zeros(q, q) : theta(a, k, tol);
            p.kappa.push_back(a[2 * k] - th);
        }
    }
    return p;
}

inline bool is_Hgg(const HermSequence& s, const Tol& tol) {
    if (!s.is_hermitian(tol)) return false;
    return linalg::is_psd(hankel_H(s, s.kappa() / 2), tol);
}

namespace detail {

// H_{floor(kappa/2)} and the shifted Hankel H^{t}_{floor((kappa-1)/2)} both PSD.
inline bool half_line_test(const HermSequence& s, const HermSequence* t, const Tol& tol) {
    if (!s.is_hermitian(tol)) return false;
    if (!linalg::is_psd(hankel_H(s, s.kappa() / 2), tol)) return false;
    if (t == nullptr) return true;
    return linalg::is_psd(hankel_H(*t, t->kappa() / 2), tol);
}

}  // namespace detail

inline bool is_Kgg(const HermSequence& s, double alpha, const Tol& tol) {
    if (s.kappa() == 0) return detail::half_line_test(s, nullptr, tol);
    const HermSequence a = shift_a(s, alpha);
    return detail::half_line_test(s, &a, tol);
}

inline bool is_Lgg(const HermSequence& s, double beta, const Tol& tol) {
    if (s.kappa() == 0) return detail::half_line_test(s, nullptr, tol);
    const HermSequence b = shift_b(s, beta);
    return detail::half_line_test(s, &b, tol);
}

}  // namespace hausdorff
