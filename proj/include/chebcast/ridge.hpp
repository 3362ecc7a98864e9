#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chebcast/chebyshev.hpp"

namespace chebcast {

/// K x (M+1) stack of Chebyshev basis rows at strictly increasing projected times.
class DesignMatrix {
public:
    [[nodiscard]] const Eigen::MatrixXd& rows() const noexcept { return rows_; }
    [[nodiscard]] const std::vector<ProjectedTime>& cached_taus() const noexcept { return taus_; }
    [[nodiscard]] BasisDegree degree() const noexcept { return degree_; }
    [[nodiscard]] Eigen::Index k_points() const noexcept { return rows_.rows(); }

    /// Wraps an arbitrary matrix without the basis-row invariant. Used where
    /// only the linear algebra matters (singular values, solver checks).
    static DesignMatrix from_raw(Eigen::MatrixXd rows);

private:
    friend DesignMatrix build_design(std::span<const ProjectedTime>, BasisDegree);
    DesignMatrix(Eigen::MatrixXd rows, std::vector<ProjectedTime> taus, BasisDegree degree)
        : rows_(std::move(rows)), taus_(std::move(taus)), degree_(degree) {}

    Eigen::MatrixXd rows_;
    std::vector<ProjectedTime> taus_;
    BasisDegree degree_;
};

/// K x F matrix of cached features, one row per cached time.
using FeatureMatrix = Eigen::MatrixXd;

/// (M+1) x F Chebyshev coefficients.
using CoefficientMatrix = Eigen::MatrixXd;

/// Ridge weight lambda >= 0.
class RegStrength {
public:
    static constexpr double kDefault = 0.1;

    RegStrength() = default;
    explicit RegStrength(double lambda);

    [[nodiscard]] double value() const noexcept { return lambda_; }

private:
    double lambda_ = kDefault;
};

struct RidgeOptions {
    /// At lambda = 0 a failed factorization is retried once with a small
    /// diagonal jitter. Disable to make rank deficiency a hard FitError.
    bool allow_jitter = true;
};

struct RidgeSolution {
    CoefficientMatrix coeffs;
    bool jittered = false;
    /// Diagonal shift actually used (lambda, or lambda + jitter).
    double effective_lambda = 0.0;
};

[[nodiscard]] DesignMatrix build_design(std::span<const ProjectedTime> cached_taus,
                                        BasisDegree degree);

/// C = (Phi^T Phi + lambda I)^-1 Phi^T H through the Cholesky factor R of the
/// (M+1) x (M+1) normal matrix. R is read off a Householder QR of
/// [Phi; sqrt(lambda) I] instead of factoring Phi^T Phi directly.
[[nodiscard]] RidgeSolution solve_ridge(const DesignMatrix& phi, const FeatureMatrix& features,
                                        RegStrength lambda, RidgeOptions options = {});

/// sigma_min(Phi) as the square root of the smallest eigenvalue of Phi^T Phi.
[[nodiscard]] double min_singular(const DesignMatrix& phi);

/// ||Phi C - H||_F^2 + lambda ||C||_F^2.
[[nodiscard]] double ridge_objective(const DesignMatrix& phi, const FeatureMatrix& features,
                                     const CoefficientMatrix& coeffs, RegStrength lambda);

}  // namespace chebcast
