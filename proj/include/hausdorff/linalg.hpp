#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hausdorff {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using Index = Eigen::Index;

struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct numerical_inconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tolerances for rank, semidefiniteness and equality decisions.
struct Tol {
    double rank_rel;
    double psd_abs;
    double eq_abs;

    explicit Tol(double rank_rel_ = 1e-10, double psd_abs_ = 1e-10, double eq_abs_ = 1e-8)
        : rank_rel(rank_rel_), psd_abs(psd_abs_), eq_abs(eq_abs_) {
        if (!(rank_rel > 0) || !(psd_abs > 0) || !(eq_abs > 0))
            throw invalid_input("Tol: all tolerances must be strictly positive");
    }
};

namespace linalg {

inline void require_finite(const CMat& A, const char* where) {
    if (!A.allFinite())
        throw invalid_input(std::string(where) + ": non-finite entries");
}

inline void require_square(const CMat& A, const char* where) {
    if (A.rows() != A.cols())
        throw invalid_input(std::string(where) + ": matrix is not square");
}

inline CMat hermitian_part(const CMat& A) { return (A + A.adjoint()) / 2.0; }

inline CMat identity(Index q) { return CMat::Identity(q, q); }
inline CMat zeros(Index p, Index q) { return CMat::Zero(p, q); }

inline Eigen::VectorXd singular_values(const CMat& A) {
    if (A.size() == 0) return Eigen::VectorXd();
    return Eigen::JacobiSVD<CMat>(A).singularValues();
}

// Spectral norm.
inline double norm2(const CMat& A) {
    if (A.size() == 0) return 0.0;
    return singular_values(A)(0);
}

inline double normF(const CMat& A) { return A.norm(); }

// Frobenius comparison scaled by max(1, |A|_F, |B|_F).
inline bool approx_equal(const CMat& A, const CMat& B, const Tol& tol) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) return false;
    const double scale = std::max({1.0, A.norm(), B.norm()});
    return (A - B).norm() <= tol.eq_abs * scale;
}

inline bool is_hermitian(const CMat& A, const Tol& tol) {
    if (A.rows() != A.cols()) return false;
    return (A - A.adjoint()).norm() <= tol.eq_abs * std::max(1.0, A.norm());
}

// Moore-Penrose inverse via SVD. Singular values at or below
// rank_rel * max(sigma_max, scale) are discarded; `scale` lets callers supply a
// reference magnitude when A itself may be pure roundoff.
inline CMat pinv(const CMat& A, const Tol& tol, double scale = 0.0) {
    require_finite(A, "pinv");
    if (A.size() == 0) return zeros(A.cols(), A.rows());
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_rel * std::max(sv(0), scale);
    CMat X = zeros(A.cols(), A.rows());
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= cut || sv(i) == 0.0) break;
        X.noalias() += svd.matrixV().col(i) * (1.0 / sv(i)) * svd.matrixU().col(i).adjoint();
    }
    return X;
}

// Thresholded SVD A ~ U_r diag(sv) V_r*, kept in factored form. Products
// L A^+ R are evaluated as (L V_r) diag(1/sv) (U_r* R): when L = R* this keeps
// the cancellation that an explicitly formed A^+ destroys, which matters for
// Schur complements of ill-conditioned Hankel blocks.
struct PinvFactors {
    CMat U;
    CMat V;
    Eigen::VectorXd inv_sv;

    CMat left(const CMat& L) const { return (L * V) * inv_sv.asDiagonal(); }
    CMat right(const CMat& R) const { return U.adjoint() * R; }
};

inline PinvFactors pinv_factors(const CMat& A, const Tol& tol, double scale = 0.0) {
    require_finite(A, "pinv_factors");
    PinvFactors F;
    if (A.size() == 0) {
        F.U = zeros(A.rows(), 0);
        F.V = zeros(A.cols(), 0);
        return F;
    }
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_rel * std::max(sv(0), scale);
    Index r = 0;
    while (r < sv.size() && sv(r) > cut && sv(r) > 0.0) ++r;
    F.U = svd.matrixU().leftCols(r);
    F.V = svd.matrixV().leftCols(r);
    F.inv_sv = sv.head(r).cwiseInverse();
    return F;
}

inline CMat pinv_product(const CMat& L, const CMat& A, const CMat& R, const Tol& tol, double scale = 0.0) {
    if (L.cols() != A.cols() || A.rows() != R.rows()) throw invalid_input("pinv_product: shape mismatch");
    const PinvFactors F = pinv_factors(A, tol, scale);
    return F.left(L) * F.right(R);
}

inline Index rank_tol(const CMat& A, const Tol& tol, double scale = 0.0) {
    require_finite(A, "rank_tol");
    const auto sv = singular_values(A);
    if (sv.size() == 0) return 0;
    const double cut = tol.rank_rel * std::max(sv(0), scale);
    Index r = 0;
    while (r < sv.size() && sv(r) > cut && sv(r) > 0.0) ++r;
    return r;
}

// Orthogonal projection onto range(A), i.e. A * pinv(A).
inline CMat range_projection(const CMat& A, const Tol& tol, double scale = 0.0) {
    require_finite(A, "range_projection");
    if (A.size() == 0) return zeros(A.rows(), A.rows());
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_rel * std::max(sv(0), scale);
    Index r = 0;
    while (r < sv.size() && sv(r) > cut && sv(r) > 0.0) ++r;
    const auto Ur = svd.matrixU().leftCols(r);
    return Ur * Ur.adjoint();
}

inline Eigen::VectorXd hermitian_eigenvalues(const CMat& A) {
    if (A.size() == 0) return Eigen::VectorXd();
    return Eigen::SelfAdjointEigenSolver<CMat>(hermitian_part(A), Eigen::EigenvaluesOnly).eigenvalues();
}

inline bool is_psd(const CMat& A, const Tol& tol) {
    require_square(A, "is_psd");
    require_finite(A, "is_psd");
    if (A.size() == 0) return true;
    const auto ev = hermitian_eigenvalues(A);
    const double scale = std::max({1.0, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
    return ev(0) >= -tol.psd_abs * scale;
}

inline bool is_pd(const CMat& A, const Tol& tol) {
    require_square(A, "is_pd");
    require_finite(A, "is_pd");
    if (A.size() == 0) return true;
    const auto ev = hermitian_eigenvalues(A);
    const double scale = std::max({1.0, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
    return ev(0) > tol.psd_abs * scale;
}

inline bool loewner_leq(const CMat& A, const CMat& B, const Tol& tol) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw invalid_input("loewner_leq: shape mismatch");
    return is_psd(B - A, tol);
}

// Unique PSD square root. Eigenvalues at or below the rank threshold are taken
// as zero, so the root has the same thresholded range as A; taking the root
// of roundoff-sized eigenvalues would otherwise lift them to sqrt(eps).
inline CMat psd_sqrt(const CMat& A, const Tol& tol) {
    require_square(A, "psd_sqrt");
    require_finite(A, "psd_sqrt");
    if (!is_hermitian(A, tol)) throw domain_error("psd_sqrt: matrix is not Hermitian");
    if (A.size() == 0) return A;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A));
    const auto& ev = es.eigenvalues();
    const double scale = std::max({1.0, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
    if (ev(0) < -tol.psd_abs * scale) throw domain_error("psd_sqrt: matrix is indefinite");
    const double cut = tol.rank_rel * std::max(ev(ev.size() - 1), 0.0);
    const Eigen::VectorXd root = ev.unaryExpr([cut](double x) { return x > cut ? std::sqrt(x) : 0.0; });
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

inline CMat parallel_sum(const CMat& A, const CMat& B, const Tol& tol) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw invalid_input("parallel_sum: shape mismatch");
    return pinv_product(A, A + B, B, tol);
}

// D - C pinv(A) B for the split of M with leading p x p block A.
inline CMat schur_complement(const CMat& M, Index p, const Tol& tol) {
    require_square(M, "schur_complement");
    const Index n = M.rows();
    if (p < 1 || p >= n) throw invalid_input("schur_complement: block size out of range");
    const Index r = n - p;
    return M.bottomRightCorner(r, r) -
           pinv_product(M.bottomLeftCorner(r, p), M.topLeftCorner(p, p), M.topRightCorner(p, r), tol);
}

// Spectral data of a PSD matrix with the small eigenvalues treated as zero.
// Everything below rank_rel * max(lambda_max, scale) is dropped, so sqrt,
// sqrt_pinv, pinv and proj all share a single rank decision.
struct PsdFactor {
    CMat sqrt;
    CMat sqrt_pinv;
    CMat pinv;
    CMat proj;
    CMat basis;  // orthonormal basis of the retained range
    Index rank = 0;
};

inline PsdFactor psd_factor(const CMat& A, const Tol& tol, double scale = 0.0) {
    require_square(A, "psd_factor");
    require_finite(A, "psd_factor");
    const Index q = A.rows();
    PsdFactor F;
    F.sqrt = F.sqrt_pinv = F.pinv = F.proj = zeros(q, q);
    F.basis = zeros(q, 0);
    if (q == 0) return F;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A));
    const auto& ev = es.eigenvalues();
    const auto& V = es.eigenvectors();
    const double cut = tol.rank_rel * std::max(ev(q - 1), scale);
    Index first = q;
    while (first > 0 && ev(first - 1) > cut && ev(first - 1) > 0.0) --first;
    F.rank = q - first;
    F.basis = V.rightCols(F.rank);
    for (Index i = first; i < q; ++i) {
        const CMat vv = V.col(i) * V.col(i).adjoint();
        const double r = std::sqrt(ev(i));
        F.sqrt += r * vv;
        F.sqrt_pinv += (1.0 / r) * vv;
        F.pinv += (1.0 / ev(i)) * vv;
        F.proj += vv;
    }
    return F;
}

// Clamp the spectrum of a Hermitian matrix into [lo, hi].
inline CMat clamp_spectrum(const CMat& A, double lo, double hi) {
    if (A.size() == 0) return A;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A));
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(lo).cwiseMin(hi);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace linalg
}  // namespace hausdorff
