#pragma once

#include "hausdorff/hausdorff.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace hausdorff::testing {

using Rational = boost::multiprecision::cpp_rational;
using RVec = std::vector<Rational>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational det(std::vector<RVec> M) {
    const std::size_t n = M.size();
    Rational d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && M[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(M[p], M[c]);
            d = -d;
        }
        d *= M[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const Rational factor = M[r][c] / M[c][c];
            for (std::size_t k = c; k < n; ++k) M[r][k] -= factor * M[c][k];
        }
    }
    return d;
}

// det of the Hankel matrix [t_{i+j}]_{i,j<=n}; with `drop_corner` the entry
// t_{2n} is replaced by 0 (and need not exist).
inline Rational hankel_det(const RVec& t, std::size_t n, bool drop_corner) {
    std::vector<RVec> H(n + 1, RVec(n + 1));
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) H[i][j] = (i + j == 2 * n && drop_corner) ? Rational(0) : t[i + j];
    return det(H);
}

// z H_{k-1}^{-1} y for a scalar sequence, from the cofactor expansion of det H_k
// along its corner: det H_k = det H_{k-1} (t_{2k} - theta).
inline Rational theta(const RVec& t, std::size_t k) {
    if (k == 0) return 0;
    return -hankel_det(t, k, true) / hankel_det(t, k - 1, false);
}

struct ScalarOracle {
    RVec u, o, d, A, B, e;
};

// Exact envelope and canonical moments of a scalar sequence with all Hankel
// blocks nonsingular.
inline ScalarOracle scalar_oracle(const RVec& s, const Rational& al, const Rational& be) {
    const std::size_t kappa = s.size() - 1;
    RVec a, b, c;
    for (std::size_t j = 0; j + 1 <= kappa; ++j) {
        a.push_back(s[j + 1] - al * s[j]);
        b.push_back(be * s[j] - s[j + 1]);
    }
    for (std::size_t j = 0; j + 2 <= kappa; ++j) c.push_back(-al * be * s[j] + (al + be) * s[j + 1] - s[j + 2]);

    ScalarOracle r;
    for (std::size_t j = 0; j <= kappa; ++j) {
        const std::size_t k = j / 2;
        if (j % 2 == 0) {
            r.u.push_back(al * s[j] + theta(a, k));
            r.o.push_back(be * s[j] - theta(b, k));
        } else {
            r.u.push_back(theta(s, k + 1));
            r.o.push_back(-al * be * s[j - 1] + (al + be) * s[j] - theta(c, k));
        }
        r.d.push_back(r.o.back() - r.u.back());
    }
    r.A.push_back(s[0]);
    r.B.push_back(s[0]);
    r.e.push_back(s[0]);
    for (std::size_t j = 1; j <= kappa; ++j) {
        r.A.push_back(s[j] - r.u[j - 1]);
        r.B.push_back(r.o[j - 1] - s[j]);
        // e_j = f_{2j} / d_{j-1}, and f_{2j} is B_j for odd j, A_j for even j.
        r.e.push_back((j % 2 ? r.B.back() : r.A.back()) / r.d[j - 1]);
    }
    return r;
}

inline RVec uniform_moments(std::size_t kappa) {
    RVec s;
    for (std::size_t j = 0; j <= kappa; ++j) s.push_back(Rational(1, static_cast<long>(j) + 1));
    return s;
}

// C(2j, j) / 4^j: moments of the arcsine law on [0, 1].
inline RVec arcsine_moments(std::size_t kappa) {
    RVec s{Rational(1)};
    for (std::size_t j = 1; j <= kappa; ++j)
        s.push_back(s.back() * Rational(static_cast<long>(2 * j - 1), static_cast<long>(2 * j)));
    return s;
}

inline HermSequence to_sequence(const RVec& s) {
    std::vector<double> v;
    for (const auto& x : s) v.push_back(to_double(x));
    return HermSequence::scalar(v);
}

inline CMat scalar(double x) { return CMat::Constant(1, 1, cplx(x, 0.0)); }

inline double max_abs_diff(const std::vector<CMat>& a, const std::vector<CMat>& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size() && j < b.size(); ++j) m = std::max(m, (a[j] - b[j]).cwiseAbs().maxCoeff());
    return a.size() == b.size() ? m : std::numeric_limits<double>::infinity();
}

inline double seq_norm(const HermSequence& s) {
    double n = 0;
    for (const auto& m : s.mats()) n += m.squaredNorm();
    return std::sqrt(n);
}

inline double seq_dist(const std::vector<CMat>& a, const std::vector<CMat>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double n = 0;
    for (std::size_t j = 0; j < a.size(); ++j) n += (a[j] - b[j]).squaredNorm();
    return std::sqrt(n);
}

// Random p x q matrix of rank <= r (Gaussian factors).
inline CMat random_matrix(Rng& rng, Index p, Index q, Index r) {
    return rng.gaussian(p, r) * rng.gaussian(r, q);
}

inline CMat random_psd(Rng& rng, Index q, Index r) {
    const CMat W = rng.gaussian(q, r);
    return W * W.adjoint();
}

inline CMat random_hermitian(Rng& rng, Index q) { return linalg::hermitian_part(rng.gaussian(q, q)); }

// Random K with 0 <= K <= I.
inline CMat random_contraction(Rng& rng, Index q) {
    const CMat U = rng.haar_unitary(q);
    Eigen::VectorXd lam(q);
    for (Index i = 0; i < q; ++i) lam(i) = rng.uniform();
    return linalg::hermitian_part(U * lam.asDiagonal() * U.adjoint());
}

struct Sample {
    SamplerConfig cfg;
    HermSequence s;
    CanonicalMoments cm;
};

// Deterministic corpus of sampled moment-space points on [alpha, beta], with
// q cycling through 1..max_q and kappa through 1..max_kappa.
inline std::vector<Sample> sampled_corpus(std::size_t count, Index max_q, Index max_kappa,
                                          const std::vector<double>& biases, const IntervalContext& ctx,
                                          std::uint64_t seed0) {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < count; ++i) {
        SamplerConfig cfg;
        cfg.q = 1 + static_cast<Index>(i % static_cast<std::size_t>(max_q));
        cfg.kappa = 1 + static_cast<Index>((i / static_cast<std::size_t>(max_q)) % static_cast<std::size_t>(max_kappa));
        cfg.seed = seed0 + i;
        cfg.boundary_bias = biases[i % biases.size()];
        auto [s, cm] = sample_moment_space(cfg, ctx);
        out.push_back({cfg, std::move(s), std::move(cm)});
    }
    return out;
}

// Largest change of the canonical moments when s is perturbed at the level of
// its own rounding: a floor under the forward error of any backward-stable
// method. Perturbations that leave the moment space are skipped.
inline double rounding_sensitivity(const HermSequence& s, const IntervalContext& ctx, int trials = 4,
                                   std::uint64_t seed = 99) {
    const CanonicalMoments base = canonical_moments(s, ctx);
    Rng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<CMat> p;
        for (const auto& m : s.mats())
            p.push_back(linalg::hermitian_part(m + 0x1.0p-52 * m.norm() * random_hermitian(rng, s.dim())));
        try {
            const CanonicalMoments cm = canonical_moments(HermSequence(s.dim(), p), ctx);
            for (std::size_t j = 1; j < cm.e.size(); ++j) worst = std::max(worst, (cm.e[j] - base.e[j]).norm());
        } catch (const domain_error&) {
        }
    }
    return worst;
}

// Samples whose rounding sensitivity leaves a 10x margin below a 1e-8 check.
inline bool well_conditioned(const Sample& smp, const IntervalContext& ctx) {
    return rounding_sensitivity(smp.s, ctx) <= 1e-9;
}

}  // namespace hausdorff::testing
