#include "chebcast/ridge.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "chebcast/error.hpp"

namespace chebcast {

namespace {

// Upper Cholesky factor R of P^T P + shift I (R^T R equals it) together with
// R^{-T} P^T B. R comes from a Householder QR of [P; sqrt(shift) I], so the
// normal matrix is never formed and the condition number is not squared.
// Returns nullopt when a pivot R_jj^2 is not safely positive relative to the
// largest diagonal entry of the normal matrix.
struct NormalFactor {
    Eigen::MatrixXd r;
    Eigen::MatrixXd qtb;
};

std::optional<NormalFactor> factor_normal(const Eigen::MatrixXd& p, const Eigen::MatrixXd& b, double shift) {
    const Eigen::Index k = p.rows(), n = p.cols();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + n, n);
    a.topRows(k) = p;
    a.bottomRows(n).diagonal().setConstant(std::sqrt(shift));
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(k + n, b.cols());
    rhs.topRows(k) = b;

    const double max_diag = a.colwise().squaredNorm().maxCoeff();
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n) * max_diag;

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    NormalFactor out;
    out.r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double d = out.r(j, j) * out.r(j, j);
        if (!(d > floor) || !std::isfinite(d)) return std::nullopt;
    }
    rhs.applyOnTheLeft(qr.householderQ().adjoint());
    out.qtb = rhs.topRows(n);
    return out;
}

// Solves R X = Y in place by back substitution.
void back_substitute(const Eigen::MatrixXd& r, Eigen::MatrixXd& y) {
    const Eigen::Index n = r.rows();
    for (Eigen::Index c = 0; c < y.cols(); ++c)
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            double s = y(i, c);
            for (Eigen::Index j = i + 1; j < n; ++j) s -= r(i, j) * y(j, c);
            y(i, c) = s / r(i, i);
        }
}

}  // namespace

DesignMatrix DesignMatrix::from_raw(Eigen::MatrixXd rows) {
    if (rows.rows() == 0 || rows.cols() == 0)
        throw InvalidArgument("design matrix must be non-empty");
    const int m = static_cast<int>(rows.cols()) - 1;
    return DesignMatrix(std::move(rows), {}, BasisDegree(m));
}

RegStrength::RegStrength(double lambda) : lambda_(lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("regularization strength must be finite and >= 0");
}

DesignMatrix build_design(std::span<const ProjectedTime> cached_taus, BasisDegree degree) {
    if (cached_taus.empty()) throw InvalidArgument("design matrix needs at least one time");
    for (std::size_t k = 1; k < cached_taus.size(); ++k) {
        if (!(cached_taus[k - 1] < cached_taus[k]))
            throw InvalidArgument("cached times must be strictly increasing (index " +
                                  std::to_string(k) + ")");
    }
    const auto k_points = static_cast<Eigen::Index>(cached_taus.size());
    const auto width = static_cast<Eigen::Index>(degree.row_length());
    // Row-major scratch so each basis row is written contiguously.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(k_points, width);
    for (Eigen::Index k = 0; k < k_points; ++k)
        basis_row_into(degree, cached_taus[static_cast<std::size_t>(k)], rows.row(k).data());
    return DesignMatrix(Eigen::MatrixXd(rows),
                        std::vector<ProjectedTime>(cached_taus.begin(), cached_taus.end()), degree);
}

RidgeSolution solve_ridge(const DesignMatrix& phi, const FeatureMatrix& features,
                          RegStrength lambda, RidgeOptions options) {
    const Eigen::MatrixXd& p = phi.rows();
    if (p.rows() != features.rows())
        throw InvalidArgument("design has " + std::to_string(p.rows()) +
                              " rows but feature matrix has " + std::to_string(features.rows()));
    if (!features.allFinite()) throw InvalidArgument("feature matrix contains non-finite values");

    const Eigen::Index width = p.cols();

    RidgeSolution out;
    out.effective_lambda = lambda.value();
    auto factor = factor_normal(p, features, lambda.value());

    if (!factor && lambda.value() == 0.0 && options.allow_jitter) {
        const double jitter = 1e-10 * p.squaredNorm() / static_cast<double>(width);
        factor = factor_normal(p, features, jitter);
        out.jittered = true;
        out.effective_lambda = jitter;
    }
    if (!factor) {
        throw FitError("ridge normal matrix is not numerically positive definite (lambda = " +
                       std::to_string(lambda.value()) + ", K = " + std::to_string(p.rows()) +
                       ", M + 1 = " + std::to_string(width) + ")");
    }

    out.coeffs = std::move(factor->qtb);
    back_substitute(factor->r, out.coeffs);
    if (!out.coeffs.allFinite()) throw FitError("ridge solve produced non-finite coefficients");
    return out;
}

double min_singular(const DesignMatrix& phi) {
    const Eigen::MatrixXd gram = phi.rows().transpose() * phi.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    return smallest > 0.0 ? std::sqrt(smallest) : 0.0;
}

double ridge_objective(const DesignMatrix& phi, const FeatureMatrix& features,
                       const CoefficientMatrix& coeffs, RegStrength lambda) {
    const Eigen::MatrixXd& p = phi.rows();
    if (p.rows() != features.rows() || p.cols() != coeffs.rows() ||
        coeffs.cols() != features.cols())
        throw InvalidArgument("ridge objective: inconsistent shapes");
    return (p * coeffs - features).squaredNorm() + lambda.value() * coeffs.squaredNorm();
}

}  // namespace chebcast
