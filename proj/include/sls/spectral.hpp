#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sls {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Mean-centered copy of a T_b x K buffer. `source` keeps the rows as given so
// the uncentered data never has to be reconstructed from matrix + mean.
struct CenteredBuffer {
    RowMatrix matrix;
    Eigen::VectorXd mean;
    RowMatrix source;

    Eigen::Index rows() const noexcept { return matrix.rows(); }
    Eigen::Index cols() const noexcept { return matrix.cols(); }
};

// Orthonormal K x m_eff basis of the dominant right singular directions with
// the matching singular values in non-increasing order.
struct SpectralBasis {
    Eigen::MatrixXd basis;
    Eigen::VectorXd singular_values;

    Eigen::Index dim() const noexcept { return basis.rows(); }
    Eigen::Index rank() const noexcept { return basis.cols(); }
};

// Thin SVD A = U diag(S) V^T with r = min(rows, cols) triples, sorted by
// non-increasing singular value. Columns of U/V attached to zero singular
// values are zero vectors.
struct ThinSvd {
    Eigen::MatrixXd left;           // rows x r
    Eigen::VectorXd singular_values;  // r
    Eigen::MatrixXd right;          // cols x r
    int sweeps = 0;
};

// One-sided (Hestenes) Jacobi SVD applied to the rows of `a`. Rows are
// rotated pairwise until mutually orthogonal; their norms are the singular
// values and their directions the right singular vectors.
ThinSvd thin_svd(const RowMatrix& a);

CenteredBuffer center_buffer(std::span<const std::vector<double>> rows);
CenteredBuffer center_buffer(const RowMatrix& rows);

// Leading right singular vectors of the centered buffer. m_eff is
// min(m, T_b, K, numerical rank), where the numerical rank counts singular
// values >= svd_tol * sigma_1. Returns nullopt (degenerate buffer) when
// sigma_1 < svd_tol.
std::optional<SpectralBasis> spectral_basis(const CenteredBuffer& centered, std::size_t m, double svd_tol);

struct ProjectionSplit {
    Eigen::VectorXd in_span;
    Eigen::VectorXd residual;
};

// in_span = B (B^T z), residual = z - in_span. Never forms the K x K projector.
ProjectionSplit project_split(const Eigen::Ref<const Eigen::VectorXd>& z, const SpectralBasis& basis);

// gamma * residual + alpha * in_span.
Eigen::VectorXd recombine(const Eigen::Ref<const Eigen::VectorXd>& in_span,
                          const Eigen::Ref<const Eigen::VectorXd>& residual, double alpha, double gamma);

} // namespace sls
