#pragma once

#include "hausdorff/linalg.hpp"

#include <initializer_list>
#include <utility>
#include <vector>

namespace hausdorff {

// A finite sequence (s_0, ..., s_kappa) of q x q complex matrices.
class HermSequence {
public:
    HermSequence(Index q, std::vector<CMat> mats) : q_(q), mats_(std::move(mats)) {
        if (q_ < 1) throw invalid_input("HermSequence: dimension must be at least 1");
        if (mats_.empty()) throw invalid_input("HermSequence: sequence must be non-empty");
        for (const auto& m : mats_) {
            if (m.rows() != q_ || m.cols() != q_)
                throw invalid_input("HermSequence: all matrices must be q x q");
            linalg::require_finite(m, "HermSequence");
        }
    }

    // Takes the dimension from the first matrix. Copies rather than moves,
    // since argument evaluation order would otherwise be unspecified.
    explicit HermSequence(const std::vector<CMat>& mats)
        : HermSequence(mats.empty() ? 1 : mats.front().rows(), mats) {}

    static HermSequence scalar(std::initializer_list<double> values) {
        return scalar(std::vector<double>(values));
    }

    static HermSequence scalar(const std::vector<double>& values) {
        std::vector<CMat> m;
        m.reserve(values.size());
        for (double v : values) m.push_back(CMat::Constant(1, 1, v));
        return HermSequence(1, std::move(m));
    }

    Index dim() const { return q_; }
    // Largest index kappa; the sequence holds kappa + 1 matrices.
    Index kappa() const { return static_cast<Index>(mats_.size()) - 1; }
    std::size_t size() const { return mats_.size(); }

    const CMat& operator[](Index j) const { return mats_[static_cast<std::size_t>(j)]; }
    const CMat& at(Index j) const {
        if (j < 0 || j > kappa()) throw invalid_input("HermSequence: index out of range");
        return (*this)[j];
    }
    const std::vector<CMat>& mats() const { return mats_; }

    bool is_hermitian(const Tol& tol) const {
        for (const auto& m : mats_)
            if (!linalg::is_hermitian(m, tol)) return false;
        return true;
    }

    HermSequence prefix(Index kappa_new) const {
        if (kappa_new < 0 || kappa_new > kappa()) throw invalid_input("HermSequence: prefix out of range");
        return HermSequence(q_, std::vector<CMat>(mats_.begin(), mats_.begin() + kappa_new + 1));
    }

    HermSequence appended(const CMat& next) const {
        auto m = mats_;
        m.push_back(next);
        return HermSequence(q_, std::move(m));
    }

private:
    Index q_;
    std::vector<CMat> mats_;
};

}  // namespace hausdorff
