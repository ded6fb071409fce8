#include "sls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sls/error.hpp"

namespace sls {

namespace {

constexpr int kMaxSweeps = 64;

void require_finite(const RowMatrix& a, const char* what) {
    if (!a.allFinite()) {
        throw InputError(std::string(what) + " contains non-finite entries");
    }
}

double dot(const double* x, const double* y, Eigen::Index n) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        s += x[i] * y[i];
    }
    return s;
}

// x <- c x - s y, y <- s x + c y
void rotate(double* x, double* y, Eigen::Index n, double c, double s) {
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

// Rotates the rows of `w` until they are mutually orthogonal; `rot` collects
// the same rotations so that w_out == rot * w_in. Rows whose squared norm is
// below `negligible` are treated as exact zeros.
int orthogonalize_rows(RowMatrix& w, RowMatrix& rot, double negligible) {
    const Eigen::Index rows = w.rows();
    const Eigen::Index cols = w.cols();
    const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<Eigen::Index>(cols, 1));
    Eigen::VectorXd norm2(rows);
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            norm2[i] = w.row(i).squaredNorm();
        }
        bool rotated = false;
        for (Eigen::Index i = 0; i + 1 < rows; ++i) {
            for (Eigen::Index j = i + 1; j < rows; ++j) {
                const double alpha = norm2[i];
                const double beta = norm2[j];
                if (alpha <= negligible || beta <= negligible) {
                    continue;
                }
                const double gamma = dot(w.row(i).data(), w.row(j).data(), cols);
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate(w.row(i).data(), w.row(j).data(), cols, c, s);
                rotate(rot.row(i).data(), rot.row(j).data(), rows, c, s);
                norm2[i] = alpha - t * gamma;
                norm2[j] = beta + t * gamma;
            }
        }
        if (!rotated) {
            return sweep;
        }
    }
    throw NumericalError("Jacobi SVD did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
}

} // namespace

ThinSvd thin_svd(const RowMatrix& a) {
    require_finite(a, "SVD input");
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const Eigen::Index r = std::min(rows, cols);

    const double frob = a.norm();
    const double negligible = std::pow(std::numeric_limits<double>::epsilon() * frob, 2);

    // Wide input: a^T = Q R, so a = R^T Q^T and the Jacobi sweeps only touch
    // the rows x rows triangle. Right vectors of a are Q times those of R^T.
    const bool wide = cols > rows;
    Eigen::MatrixXd q;
    RowMatrix w;
    if (wide) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.transpose());
        q = qr.householderQ() * Eigen::MatrixXd::Identity(cols, rows);
        w = qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
    } else {
        w = a;
    }
    RowMatrix rot = RowMatrix::Identity(rows, rows);
    const int sweeps = orthogonalize_rows(w, rot, negligible);

    Eigen::VectorXd sigma(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        sigma[i] = w.row(i).norm();
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(rows));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return sigma[x] > sigma[y]; });

    ThinSvd out;
    out.sweeps = sweeps;
    out.left = Eigen::MatrixXd::Zero(rows, r);
    out.singular_values = Eigen::VectorXd::Zero(r);
    out.right = Eigen::MatrixXd::Zero(cols, r);
    for (Eigen::Index c = 0; c < r; ++c) {
        const Eigen::Index src = order[static_cast<std::size_t>(c)];
        const double s = sigma[src];
        out.singular_values[c] = s;
        if (s * s > negligible) {
            const Eigen::VectorXd v = w.row(src).transpose() / s;
            out.right.col(c) = wide ? Eigen::VectorXd(q * v) : v;
            // a = rot^T w, so the left vector is column src of rot^T.
            out.left.col(c) = rot.row(src).transpose();
        }
    }
    return out;
}

CenteredBuffer center_buffer(const RowMatrix& rows) {
    if (rows.rows() == 0) {
        throw InputError("cannot center an empty buffer");
    }
    require_finite(rows, "buffer");
    CenteredBuffer out;
    out.source = rows;
    out.mean = rows.colwise().mean().transpose();
    out.matrix = rows.rowwise() - out.mean.transpose();
    return out;
}

CenteredBuffer center_buffer(std::span<const std::vector<double>> rows) {
    if (rows.empty()) {
        throw InputError("cannot center an empty buffer");
    }
    const std::size_t width = rows.front().size();
    RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width) {
            throw InputError("buffer row " + std::to_string(i) + " has length " + std::to_string(rows[i].size()) +
                             ", expected " + std::to_string(width));
        }
        m.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(rows[i].data(),
                                                                                    static_cast<Eigen::Index>(width));
    }
    return center_buffer(m);
}

std::optional<SpectralBasis> spectral_basis(const CenteredBuffer& centered, std::size_t m, double svd_tol) {
    if (m == 0) {
        throw ConfigError("spectral rank must be positive");
    }
    const ThinSvd svd = thin_svd(centered.matrix);
    if (svd.singular_values.size() == 0 || svd.singular_values[0] < svd_tol) {
        return std::nullopt;
    }
    const double leading = svd.singular_values[0];
    Eigen::Index m_eff = std::min<Eigen::Index>(static_cast<Eigen::Index>(m), svd.singular_values.size());
    Eigen::Index numerical_rank = 0;
    while (numerical_rank < svd.singular_values.size() && svd.singular_values[numerical_rank] >= svd_tol * leading) {
        ++numerical_rank;
    }
    m_eff = std::min(m_eff, numerical_rank);

    SpectralBasis out;
    out.basis = svd.right.leftCols(m_eff);
    out.singular_values = svd.singular_values.head(m_eff);
    return out;
}

ProjectionSplit project_split(const Eigen::Ref<const Eigen::VectorXd>& z, const SpectralBasis& basis) {
    if (z.size() != basis.dim()) {
        throw InputError("projection of a length-" + std::to_string(z.size()) + " vector onto a basis of dimension " +
                         std::to_string(basis.dim()));
    }
    ProjectionSplit out;
    const Eigen::VectorXd coeffs = basis.basis.transpose() * z;
    out.in_span = basis.basis * coeffs;
    out.residual = z - out.in_span;
    return out;
}

Eigen::VectorXd recombine(const Eigen::Ref<const Eigen::VectorXd>& in_span,
                          const Eigen::Ref<const Eigen::VectorXd>& residual, double alpha, double gamma) {
    if (in_span.size() != residual.size()) {
        throw InputError("recombine: component lengths differ");
    }
    return gamma * residual + alpha * in_span;
}

} // namespace sls
