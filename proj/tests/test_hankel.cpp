#include "support.hpp"

#include <gtest/gtest.h>

#include <complex>

using namespace hausdorff;
using namespace hausdorff::testing;

namespace {

const Tol tol;

double re(const CMat& m) { return m(0, 0).real(); }

// Moments of a random molecular measure on the real line, optionally with a
// PSD bump on the last even moment. Nonzero nodes satisfy 1/2 <= |x| <= 2 so
// that ranges are well separated from the rank threshold.
HermSequence random_H_sequence(Rng& rng, Index q, Index n, bool bump) {
    std::vector<CMat> s(static_cast<std::size_t>(2 * n + 1), linalg::zeros(q, q));
    const int atoms = 1 + static_cast<int>(rng.uniform() * 3);
    for (int l = 0; l < atoms; ++l) {
        const double x = rng.uniform() < 0.2 ? 0.0 : (rng.uniform() < 0.5 ? -1 : 1) * (0.5 + 1.5 * rng.uniform());
        const CMat A = random_psd(rng, q, 1 + static_cast<Index>(rng.uniform() * static_cast<double>(q)) % q);
        double p = 1;
        for (auto& sj : s) {
            sj += p * A;
            p *= x;
        }
    }
    if (bump) s.back() += random_psd(rng, q, 1);
    return HermSequence(q, std::move(s));
}

std::vector<CMat> scaled(const std::vector<CMat>& v, cplx lambda) {
    std::vector<CMat> out;
    for (const auto& m : v) out.push_back(lambda * m);
    return out;
}

void expect_seq_near(const std::vector<CMat>& a, const std::vector<CMat>& b, double eps) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        EXPECT_LE((a[j] - b[j]).norm(), eps * std::max(1.0, b[j].norm())) << "index " << j;
}

}  // namespace

TEST(Shifts, Examples) {
    const HermSequence s = HermSequence::scalar({1, 0.5, 1.0 / 3});
    const HermSequence a = shift_a(s, 0.0);
    EXPECT_DOUBLE_EQ(re(a[0]), 0.5);
    EXPECT_DOUBLE_EQ(re(a[1]), 1.0 / 3);
    const HermSequence b = shift_b(s, 1.0);
    EXPECT_DOUBLE_EQ(re(b[0]), 0.5);
    EXPECT_DOUBLE_EQ(re(b[1]), 1.0 / 6);
    const HermSequence c = shift_c(s, 0.0, 1.0);
    ASSERT_EQ(c.kappa(), 0);
    EXPECT_DOUBLE_EQ(re(c[0]), 1.0 / 6);

    const HermSequence ones(2, std::vector<CMat>(4, linalg::identity(2)));
    for (Index j = 0; j < 3; ++j) {
        EXPECT_LE((shift_a(ones, -1.0)[j] - 2.0 * linalg::identity(2)).norm(), 1e-15);
        EXPECT_LE(shift_b(ones, 1.0)[j].norm(), 1e-15);
    }
    EXPECT_THROW(shift_a(HermSequence::scalar({1}), 0.0), invalid_input);
    EXPECT_THROW(shift_c(s.prefix(1), 0.0, 1.0), invalid_input);
}

TEST(HankelBlocks, Assembly) {
    const HermSequence s = HermSequence::scalar({1, 0.5, 1.0 / 3});
    const CMat H = hankel_H(s, 1);
    ASSERT_EQ(H.rows(), 2);
    EXPECT_DOUBLE_EQ(H(0, 0).real(), 1.0);
    EXPECT_DOUBLE_EQ(H(0, 1).real(), 0.5);
    EXPECT_DOUBLE_EQ(H(1, 0).real(), 0.5);
    EXPECT_DOUBLE_EQ(H(1, 1).real(), 1.0 / 3);
    EXPECT_DOUBLE_EQ(re(hankel_K(s, 0)), 0.5);
    EXPECT_DOUBLE_EQ(re(hankel_G(s, 0)), 1.0 / 3);
    EXPECT_THROW(hankel_H(s, 2), invalid_input);
    EXPECT_THROW(hankel_K(s, 1), invalid_input);

    const CMat y = y_block(s, 1, 2), z = z_block(s, 1, 2);
    ASSERT_EQ(y.rows(), 2);
    ASSERT_EQ(y.cols(), 1);
    ASSERT_EQ(z.rows(), 1);
    ASSERT_EQ(z.cols(), 2);
    EXPECT_DOUBLE_EQ(y(0, 0).real(), 0.5);
    EXPECT_DOUBLE_EQ(y(1, 0).real(), 1.0 / 3);
    EXPECT_DOUBLE_EQ(z(0, 1).real(), 1.0 / 3);
    EXPECT_THROW(y_block(s, 2, 1), invalid_input);
    EXPECT_THROW(z_block(s, 0, 3), invalid_input);

    Rng rng(21);
    std::vector<CMat> m;
    for (int j = 0; j < 3; ++j) m.push_back(random_hermitian(rng, 2));
    const HermSequence t(2, m);
    EXPECT_EQ(y_block(t, 0, 2).rows(), 6);
    EXPECT_EQ(y_block(t, 0, 2).cols(), 2);
    EXPECT_EQ(z_block(t, 0, 2).rows(), 2);
    EXPECT_EQ(z_block(t, 0, 2).cols(), 6);
    EXPECT_LE((y_block(t, 0, 2).block(2, 0, 2, 2) - m[1]).norm(), 0.0);
    EXPECT_LE((z_block(t, 0, 2).block(0, 4, 2, 2) - m[2]).norm(), 0.0);
}

TEST(LambdaFamily, Examples) {
    const HermSequence s = HermSequence::scalar({1, 0.5, 1.0 / 3, 0.25});
    const LambdaFamily L0 = lambda_family(s, 0, tol);
    for (const CMat* m : {&L0.Theta, &L0.Sigma, &L0.M, &L0.N, &L0.Lambda}) EXPECT_EQ(m->norm(), 0.0);
    EXPECT_NEAR(re(theta(s.prefix(2), 1, tol)), 0.25, 1e-15);
    // Direct products with H_0 = 1: Sigma = 1/2 * 1/2 * 1/2, M = N = 1/2 * 1/3.
    const LambdaFamily L1 = lambda_family(s.prefix(2), 1, tol);
    EXPECT_NEAR(re(L1.Sigma), 0.125, 1e-15);
    EXPECT_NEAR(re(L1.M), 1.0 / 6, 1e-15);
    EXPECT_NEAR(re(L1.N), 1.0 / 6, 1e-15);
    EXPECT_NEAR(re(L1.Lambda), 1.0 / 3 - 0.125, 1e-15);
    EXPECT_THROW(lambda_family(s, 2, tol), invalid_input);
    EXPECT_THROW(theta(s, 3, tol), invalid_input);
}

TEST(Theta, MatchesRationalOracle) {
    for (const RVec& t : {uniform_moments(9), arcsine_moments(9)}) {
        const HermSequence s = to_sequence(t);
        for (std::size_t k = 0; 2 * k <= 9 + 1; ++k)
            EXPECT_NEAR(re(theta(s, static_cast<Index>(k), tol)), to_double(hausdorff::testing::theta(t, k)), 1e-10) << k;
    }
}

TEST(HankelParametrization, Examples) {
    const HermSequence s = HermSequence::scalar({1, 0.5, 1.0 / 3, 0.25});
    const HankelParams p = hankel_parametrization(s, tol);
    EXPECT_DOUBLE_EQ(re(p.h[0]), 1.0);
    EXPECT_DOUBLE_EQ(re(p.h[1]), 0.5);
    EXPECT_NEAR(re(p.h[2]), 1.0 / 12, 1e-15);
    EXPECT_NEAR(re(p.h[3]), 0.25 - (1.0 / 3 - 0.125), 1e-15);
    // Even parameters are Schur complements: det H_n / det H_{n-1}.
    const RVec u = uniform_moments(8);
    const HankelParams pu = hankel_parametrization(to_sequence(u), tol);
    for (std::size_t n = 1; n <= 4; ++n)
        EXPECT_NEAR(re(pu.h[2 * n]), to_double(hankel_det(u, n, false) / hankel_det(u, n - 1, false)), 1e-12);
}

TEST(HankelParametrization, ScalingIsometryAndTwist) {
    Rng rng(22);
    for (int i = 0; i < 20; ++i) {
        const Index q = 1 + i % 3;
        const HermSequence s = random_H_sequence(rng, q, 2, false).prefix(3 + i % 2);
        const HankelParams p = hankel_parametrization(s, tol);

        const cplx lambda(rng.normal(), rng.normal());
        expect_seq_near(hankel_parametrization(HermSequence(q, scaled(s.mats(), lambda)), tol).h,
                        scaled(p.h, lambda), 1e-7);

        const double phi = 2 * std::numbers::pi * rng.uniform();
        const cplx xi = std::polar(1.0, phi);
        std::vector<CMat> tw, htw;
        for (Index j = 0; j <= s.kappa(); ++j) {
            tw.push_back(std::pow(xi, static_cast<int>(j)) * s[j]);
            htw.push_back(std::pow(xi, static_cast<int>(j)) * p.h[static_cast<std::size_t>(j)]);
        }
        expect_seq_near(hankel_parametrization(HermSequence(q, tw), tol).h, htw, 1e-7);

        const Index big = q + 1;
        const CMat U = rng.haar_unitary(big).leftCols(q);  // U* U = I
        const CMat V = rng.haar_unitary(big).topRows(q);   // V V* = I
        std::vector<CMat> conj, hconj;
        for (Index j = 0; j <= s.kappa(); ++j) {
            conj.push_back(U * s[j] * V);
            hconj.push_back(U * p.h[static_cast<std::size_t>(j)] * V);
        }
        expect_seq_near(hankel_parametrization(HermSequence(big, conj), tol).h, hconj, 1e-7);
    }
}

TEST(HankelParametrization, Superadditivity) {
    Rng rng(23);
    for (int i = 0; i < 30; ++i) {
        const Index q = 1 + i % 3;
        const HermSequence s = random_H_sequence(rng, q, 2, i % 2 == 0);
        const HermSequence t = random_H_sequence(rng, q, 2, i % 3 == 0);
        std::vector<CMat> sum;
        for (Index j = 0; j <= 4; ++j) sum.push_back(s[j] + t[j]);
        const auto hs = hankel_parametrization(s, tol).h, ht = hankel_parametrization(t, tol).h;
        const auto hsum = hankel_parametrization(HermSequence(q, sum), tol).h;
        for (std::size_t k = 0; k <= 4; k += 2)
            EXPECT_TRUE(linalg::loewner_leq(linalg::hermitian_part(hs[k] + ht[k]), linalg::hermitian_part(hsum[k]),
                                            Tol(1e-10, 1e-8)))
                << "k=" << k;
    }
}

TEST(StieltjesParametrization, ExamplesAndReconstruction) {
    const HermSequence s = HermSequence::scalar({1, 0.5, 1.0 / 3, 0.25});
    const StieltjesParams p = stieltjes_parametrization(s, 0.0, tol);
    EXPECT_DOUBLE_EQ(re(p.kappa[0]), 1.0);
    EXPECT_DOUBLE_EQ(re(p.kappa[1]), 0.5);
    EXPECT_NEAR(re(p.kappa[2]), 1.0 / 12, 1e-15);
    EXPECT_NEAR(re(p.kappa[3]), 1.0 / 36, 1e-15);

    Rng rng(24);
    for (int i = 0; i < 20; ++i) {
        const Index q = 1 + i % 3;
        const HermSequence t = random_H_sequence(rng, q, 2, false);
        const double al = -2.5;
        const StieltjesParams k = stieltjes_parametrization(t, al, tol);
        for (Index j = 1; j <= t.kappa(); ++j) {
            CMat rebuilt;
            if (j % 2 == 0) {
                rebuilt = theta(t, j / 2, tol) + k.kappa[static_cast<std::size_t>(j)];
            } else {
                const Index kk = (j - 1) / 2;
                const CMat th = kk == 0 ? linalg::zeros(q, q) : theta(shift_a(t.prefix(j), al), kk, tol);
                rebuilt = al * t[j - 1] + th + k.kappa[static_cast<std::size_t>(j)];
            }
            EXPECT_LE((rebuilt - t[j]).norm(), 1e-8 * std::max(1.0, t[j].norm()));
        }

        // Reflection: ((-1)^j s_j) at -alpha has parameters ((-1)^j kappa_j).
        std::vector<CMat> refl;
        for (Index j = 0; j <= t.kappa(); ++j) refl.push_back((j % 2 ? -1.0 : 1.0) * t[j]);
        const StieltjesParams kr = stieltjes_parametrization(HermSequence(q, refl), -al, tol);
        std::vector<CMat> expect;
        for (std::size_t j = 0; j < k.kappa.size(); ++j) expect.push_back((j % 2 ? -1.0 : 1.0) * k.kappa[j]);
        expect_seq_near(kr.kappa, expect, 1e-7);
    }
}

TEST(ClassPredicates, Examples) {
    const HermSequence s = HermSequence::scalar({1, 0.5, 1.0 / 3});
    EXPECT_TRUE(is_Hgg(s, tol));
    EXPECT_TRUE(is_Kgg(s, 0.0, tol));
    EXPECT_TRUE(is_Lgg(s, 1.0, tol));
    EXPECT_FALSE(is_Hgg(HermSequence::scalar({1, 2, 1}), tol));
    EXPECT_NEAR(hankel_H(HermSequence::scalar({1, 2, 1}), 1).determinant().real(), -3.0, 1e-15);
    Rng rng(25);
    const HermSequence single(3, {random_psd(rng, 3, 2)});
    EXPECT_TRUE(is_Hgg(single, tol));
    EXPECT_TRUE(is_Kgg(single, 0.0, tol));
    EXPECT_TRUE(is_Lgg(single, 1.0, tol));
    // (1, 2) on [0, 1]: a_0 = 2 fine, b_0 = -1 fails.
    EXPECT_TRUE(is_Kgg(HermSequence::scalar({1, 2}), 0.0, tol));
    EXPECT_FALSE(is_Lgg(HermSequence::scalar({1, 2}), 1.0, tol));
    CMat nh = linalg::identity(2);
    nh(0, 1) = 1.0;
    EXPECT_FALSE(is_Hgg(HermSequence(2, {nh}), tol));
}

// H_n >= 0 iff h_0 >= 0 and, for each k, the new block column lies in
// range(H_{k-1}) and the Schur complement h_{2k} is PSD.
TEST(ClassPredicates, AgreesWithParameterCriterion) {
    Rng rng(26);
    int positives = 0, negatives = 0;
    for (int i = 0; i < 200; ++i) {
        const Index q = 1 + i % 3;
        HermSequence s = random_H_sequence(rng, q, 2, i % 2 == 0);
        if (i % 3 == 0) {
            std::vector<CMat> m = s.mats();
            m[static_cast<std::size_t>(1 + i % 4)] += 0.3 * random_hermitian(rng, q);
            s = HermSequence(q, m);
        }
        const Tol loose(1e-10, 1e-8);
        const HankelParams p = hankel_parametrization(s, loose);
        bool crit = linalg::is_psd(p.h[0], loose);
        for (Index k = 1; k <= 2; ++k) {
            const CMat Hm = hankel_H(s, k - 1);
            const CMat y = y_block(s, k, 2 * k - 1);
            const double scale = std::max(1.0, linalg::norm2(hankel_H(s, k)));
            crit = crit && (linalg::range_projection(Hm, loose, scale) * y - y).norm() <= 1e-8 * scale &&
                   linalg::is_psd(linalg::hermitian_part(p.h[static_cast<std::size_t>(2 * k)]), loose);
        }
        const bool direct = is_Hgg(s, loose);
        EXPECT_EQ(direct, crit) << "sample " << i;
        (direct ? positives : negatives)++;
    }
    EXPECT_GT(positives, 20);
    EXPECT_GT(negatives, 20);
}

TEST(ClassPredicates, RangeChain) {
    Rng rng(27);
    for (int i = 0; i < 40; ++i) {
        const Index q = 2 + i % 2;
        const Index n = 2 + i % 2;
        const HermSequence s = random_H_sequence(rng, q, n, i % 2 == 0);
        ASSERT_TRUE(is_Hgg(s, tol));
        const double scale = linalg::norm2(hankel_H(s, n));
        const Tol rt(1e-8);
        const CMat P2 = linalg::range_projection(s[2], rt, scale);
        for (Index k = 2; k <= n - 1; ++k)
            EXPECT_LE((linalg::range_projection(s[2 * k], rt, scale) - P2).norm(), 1e-6) << "k=" << k;
        EXPECT_LE((linalg::range_projection(s[0], rt, scale) * P2 - P2).norm(), 1e-6);
        EXPECT_LE((linalg::range_projection(s[2 * n], rt, scale) * P2 - P2).norm(), 1e-6);
    }
}
