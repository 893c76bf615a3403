#pragma once

#include "hausdorff/fparam.hpp"
#include "hausdorff/linalg.hpp"
#include "hausdorff/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace hausdorff {

// sum_l delta_{xi_l} A_l with strictly increasing nodes and PSD weights.
class MolecularMeasure {
public:
    MolecularMeasure(std::vector<double> nodes, std::vector<CMat> weights, const Tol& tol = Tol())
        : nodes_(std::move(nodes)), weights_(std::move(weights)) {
        if (nodes_.empty() || nodes_.size() != weights_.size())
            throw invalid_input("MolecularMeasure: need equally many (>= 1) nodes and weights");
        const Index q = weights_.front().rows();
        for (std::size_t l = 0; l < nodes_.size(); ++l) {
            if (!std::isfinite(nodes_[l])) throw invalid_input("MolecularMeasure: non-finite node");
            if (l > 0 && !(nodes_[l - 1] < nodes_[l]))
                throw invalid_input("MolecularMeasure: nodes must be strictly increasing");
            const CMat& A = weights_[l];
            if (A.rows() != q || A.cols() != q || q < 1)
                throw invalid_input("MolecularMeasure: weights must all be q x q");
            if (!linalg::is_hermitian(A, tol) || !linalg::is_psd(A, tol))
                throw invalid_input("MolecularMeasure: weights must be positive semidefinite");
        }
    }

    Index dim() const { return weights_.front().rows(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<CMat>& weights() const { return weights_; }

    bool supported_in(const IntervalContext& ctx) const {
        return nodes_.front() >= ctx.alpha() && nodes_.back() <= ctx.beta();
    }

private:
    std::vector<double> nodes_;
    std::vector<CMat> weights_;
};

inline HermSequence moments(const MolecularMeasure& mu, Index kappa) {
    if (kappa < 0) throw invalid_input("moments: kappa must be non-negative");
    std::vector<CMat> s(static_cast<std::size_t>(kappa) + 1, linalg::zeros(mu.dim(), mu.dim()));
    for (std::size_t l = 0; l < mu.nodes().size(); ++l) {
        double p = 1.0;  // 0^0 = 1
        for (auto& sj : s) {
            sj += p * mu.weights()[l];
            p *= mu.nodes()[l];
        }
    }
    return HermSequence(mu.dim(), std::move(s));
}

// Image under x -> theta x + eta.
inline MolecularMeasure image_measure(const MolecularMeasure& mu, double theta, double eta) {
    if (theta == 0.0) throw invalid_input("image_measure: theta must be nonzero");
    std::vector<double> nodes;
    for (double x : mu.nodes()) nodes.push_back(theta * x + eta);
    std::vector<CMat> weights = mu.weights();
    if (theta < 0) {
        std::reverse(nodes.begin(), nodes.end());
        std::reverse(weights.begin(), weights.end());
    }
    return MolecularMeasure(std::move(nodes), std::move(weights));
}

// First k with d_k = 0 (e_k idempotent): every representing measure is then
// molecular. This is the equivalent order at truncation level only.
inline std::optional<Index> molecular_equivalent_order(const HermSequence& s, const IntervalContext& ctx) {
    return classify(canonical_moments(s, ctx), false, ctx.tol()).degenerate_index;
}

struct SamplerConfig {
    Index q = 1;
    Index kappa = 0;
    std::uint64_t seed = 0;
    double boundary_bias = 0.0;
    double s0_scale = 1.0;

    void validate() const {
        if (q < 1) throw invalid_input("SamplerConfig: q must be at least 1");
        if (kappa < 0) throw invalid_input("SamplerConfig: kappa must be non-negative");
        if (!(boundary_bias >= 0.0 && boundary_bias <= 1.0))
            throw invalid_input("SamplerConfig: boundary_bias must lie in [0, 1]");
        if (!(s0_scale > 0.0) || !std::isfinite(s0_scale))
            throw invalid_input("SamplerConfig: s0_scale must be positive");
    }
};

// Portable random stream: mt19937_64 with the uniform and normal conversions
// done by hand, since the standard distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent stream for draw number `stream` under a base seed.
    static Rng split(std::uint64_t seed, std::uint64_t stream) {
        return Rng(splitmix64(splitmix64(seed) ^ (stream + 0x9e3779b97f4a7c15ULL)));
    }

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do u1 = uniform();
        while (u1 == 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
    }

    CMat gaussian(Index rows, Index cols) {
        CMat G(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) G(i, j) = complex_normal();
        return G;
    }

    // Haar-distributed unitary: QR of a complex Gaussian, phases of R moved into Q.
    CMat haar_unitary(Index n) {
        if (n == 0) return CMat(0, 0);
        const CMat G = gaussian(n, n);
        Eigen::HouseholderQR<CMat> qr(G);
        CMat Q = qr.householderQ();
        const CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Index i = 0; i < n; ++i) {
            const cplx r = R(i, i);
            if (std::abs(r) > 0) Q.col(i) *= r / std::abs(r);
        }
        return Q;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Draws a random point of the moment space through its canonical moments:
// e_0 = s0_scale W W*, and e_k = V U diag(u) U* V* for k >= 1 where V spans
// range(P_{k-1}), U is Haar on that range and u_i is uniform on [0, 1], pinned
// to 0 or 1 with probability boundary_bias. Stream k feeds draw e_k only.
inline std::pair<HermSequence, CanonicalMoments> sample_moment_space(const SamplerConfig& cfg,
                                                                     const IntervalContext& ctx) {
    cfg.validate();
    const Tol& tol = ctx.tol();
    const double eta = ctx.width();
    std::vector<CMat> e;
    linalg::PsdFactor prev;
    CMat d_prev;
    for (Index k = 0; k <= cfg.kappa; ++k) {
        Rng rng = Rng::split(cfg.seed, static_cast<std::uint64_t>(k));
        CMat ek, dk;
        if (k == 0) {
            const CMat W = rng.gaussian(cfg.q, cfg.q);
            ek = cfg.s0_scale * W * W.adjoint();
            dk = eta * ek;
        } else {
            const Index r = prev.rank;
            const CMat U = rng.haar_unitary(r);
            Eigen::VectorXd u(r);
            for (Index i = 0; i < r; ++i) {
                if (rng.uniform() < cfg.boundary_bias)
                    u(i) = rng.uniform() < 0.5 ? 0.0 : 1.0;
                else
                    u(i) = rng.uniform();
            }
            const CMat VU = prev.basis * U;
            ek = linalg::hermitian_part(VU * u.asDiagonal() * VU.adjoint());
            dk = detail::length_step(prev, ek, eta, tol);
        }
        prev = detail::length_factor(dk, k == 0 ? nullptr : &d_prev, eta, tol);
        d_prev = dk;
        e.push_back(ek);
    }
    CanonicalMoments cm;
    e_recursion(e, eta, tol, cm);
    HermSequence s = from_canonical(cm.e, cfg.q, ctx);
    return {std::move(s), std::move(cm)};
}

}  // namespace hausdorff
