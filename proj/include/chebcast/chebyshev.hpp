#pragma once

#include <cstddef>
#include <vector>

namespace chebcast {

/// A point of the Chebyshev domain [-1, 1].
///
/// Construction rejects values outside the domain, except that values within
/// kBoundarySlack of an endpoint are snapped onto it so that round-off from
/// time projection never makes an endpoint illegal.
class ProjectedTime {
public:
    static constexpr double kBoundarySlack = 1e-12;

    explicit ProjectedTime(double tau);

    [[nodiscard]] double value() const noexcept { return tau_; }

    friend bool operator==(ProjectedTime, ProjectedTime) = default;
    friend auto operator<=>(ProjectedTime, ProjectedTime) = default;

private:
    double tau_;
};

/// Maximum polynomial degree M; a basis row holds M + 1 entries.
class BasisDegree {
public:
    explicit BasisDegree(int m_max);

    [[nodiscard]] int value() const noexcept { return m_; }
    [[nodiscard]] std::size_t row_length() const noexcept {
        return static_cast<std::size_t>(m_) + 1;
    }

private:
    int m_;
};

/// Analyticity data for a function on the Bernstein ellipse E_rho:
/// rho > 1 and sup |f| over E_rho bounded by b_sup > 0.
struct EllipseBoundParams {
    EllipseBoundParams(double rho, double b_sup);

    double rho;
    double b_sup;

    /// Semi-major axis (rho + 1/rho) / 2 of E_rho.
    [[nodiscard]] double semi_major() const noexcept;
    /// Semi-minor axis (rho - 1/rho) / 2 of E_rho.
    [[nodiscard]] double semi_minor() const noexcept;
};

/// T_m(tau) via the three-term recurrence, iterated upward from T_0 and T_1.
[[nodiscard]] double eval_cheb(int m, ProjectedTime tau);

/// [T_0(tau), ..., T_M(tau)].
[[nodiscard]] std::vector<double> basis_row(BasisDegree degree, ProjectedTime tau);

/// Writes the basis row into `out`, which must have degree.row_length() slots.
void basis_row_into(BasisDegree degree, ProjectedTime tau, double* out);

/// Diffusion time t in [0, 1] mapped affinely onto [-1, 1] (tau = 2t - 1).
[[nodiscard]] ProjectedTime project_time(double t);

/// Uniform bound 2B/(rho - 1) * rho^-M on the degree-M truncation error.
[[nodiscard]] double truncation_bound(const EllipseBoundParams& params, BasisDegree degree);

}  // namespace chebcast
