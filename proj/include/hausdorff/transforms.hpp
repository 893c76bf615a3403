#pragma once

#include "hausdorff/fparam.hpp"
#include "hausdorff/linalg.hpp"
#include "hausdorff/sequence.hpp"

#include <cstdint>
#include <vector>

namespace hausdorff {

// Binomial coefficient C(j, l): exact 64-bit Pascal rows up to j = 62, floating
// point beyond that.
inline double binomial(Index j, Index l) {
    if (l < 0 || l > j) return 0.0;
    if (j <= 62) {
        std::vector<std::uint64_t> row(static_cast<std::size_t>(j) + 1, 0);
        row[0] = 1;
        for (Index r = 1; r <= j; ++r)
            for (Index c = r; c >= 1; --c) row[static_cast<std::size_t>(c)] += row[static_cast<std::size_t>(c - 1)];
        return static_cast<double>(row[static_cast<std::size_t>(l)]);
    }
    if (l > j - l) l = j - l;
    double c = 1.0;
    for (Index i = 1; i <= l; ++i) c = c * static_cast<double>(j - l + i) / static_cast<double>(i);
    return c;
}

// w_j = sum_l C(j,l) psi^l phi^(j-l) s_l: the moments of the image measure
// under x -> psi x + phi.
inline HermSequence binomial_transform(const HermSequence& s, cplx phi, cplx psi) {
    std::vector<CMat> w;
    for (Index j = 0; j <= s.kappa(); ++j) {
        CMat acc = linalg::zeros(s.dim(), s.dim());
        for (Index l = 0; l <= j; ++l)
            acc += binomial(j, l) * std::pow(psi, static_cast<int>(l)) * std::pow(phi, static_cast<int>(j - l)) * s[l];
        w.push_back(std::move(acc));
    }
    return HermSequence(s.dim(), std::move(w));
}

inline IntervalContext transformed_context(const IntervalContext& ctx, double eta, double theta) {
    if (theta == 0.0) throw invalid_input("transformed_context: theta must be nonzero");
    if (theta > 0) return IntervalContext(theta * ctx.alpha() + eta, theta * ctx.beta() + eta, ctx.tol());
    return IntervalContext(theta * ctx.beta() + eta, theta * ctx.alpha() + eta, ctx.tol());
}

// Symmetry with respect to eta: s coincides with its image under x -> eta - x.
inline bool is_symmetric_sequence(const HermSequence& s, double eta, const Tol& tol) {
    const HermSequence w = binomial_transform(s, eta, -1.0);
    for (Index j = 0; j <= s.kappa(); ++j)
        if ((s[j] - w[j]).norm() / std::max(1.0, s[j].norm()) > tol.eq_abs) return false;
    return true;
}

}  // namespace hausdorff
