#include "chebcast/chebyshev.hpp"

#include <cmath>
#include <string>

#include "chebcast/error.hpp"

namespace chebcast {

ProjectedTime::ProjectedTime(double tau) : tau_(tau) {
    if (!std::isfinite(tau)) throw InvalidArgument("projected time must be finite");
    if (tau > 1.0) {
        if (tau - 1.0 > kBoundarySlack)
            throw InvalidArgument("projected time " + std::to_string(tau) + " exceeds 1");
        tau_ = 1.0;
    } else if (tau < -1.0) {
        if (-1.0 - tau > kBoundarySlack)
            throw InvalidArgument("projected time " + std::to_string(tau) + " is below -1");
        tau_ = -1.0;
    }
}

BasisDegree::BasisDegree(int m_max) : m_(m_max) {
    if (m_max < 0) throw InvalidArgument("basis degree must be non-negative");
}

EllipseBoundParams::EllipseBoundParams(double rho_, double b_sup_) : rho(rho_), b_sup(b_sup_) {
    if (!(rho > 1.0) || !std::isfinite(rho))
        throw InvalidArgument("Bernstein ellipse parameter must satisfy rho > 1");
    if (!(b_sup > 0.0) || !std::isfinite(b_sup))
        throw InvalidArgument("ellipse sup bound must be positive");
}

double EllipseBoundParams::semi_major() const noexcept { return 0.5 * (rho + 1.0 / rho); }
double EllipseBoundParams::semi_minor() const noexcept { return 0.5 * (rho - 1.0 / rho); }

double eval_cheb(int m, ProjectedTime tau) {
    if (m < 0) throw InvalidArgument("Chebyshev index must be non-negative");
    const double x = tau.value();
    if (m == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 2; k <= m; ++k) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void basis_row_into(BasisDegree degree, ProjectedTime tau, double* out) {
    const double x = tau.value();
    const int m_max = degree.value();
    out[0] = 1.0;
    if (m_max == 0) return;
    out[1] = x;
    for (int m = 2; m <= m_max; ++m) out[m] = 2.0 * x * out[m - 1] - out[m - 2];
}

std::vector<double> basis_row(BasisDegree degree, ProjectedTime tau) {
    std::vector<double> row(degree.row_length());
    basis_row_into(degree, tau, row.data());
    return row;
}

ProjectedTime project_time(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw InvalidArgument("diffusion time " + std::to_string(t) + " outside [0, 1]");
    return ProjectedTime(2.0 * t - 1.0);
}

double truncation_bound(const EllipseBoundParams& params, BasisDegree degree) {
    return 2.0 * params.b_sup / (params.rho - 1.0) * std::pow(params.rho, -degree.value());
}

}  // namespace chebcast
