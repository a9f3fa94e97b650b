#pragma once

#include <span>
#include <vector>

#include "extremal/geometry.hpp"
#include "extremal/measure.hpp"

namespace extremal {

/// Fourier data of log f in the circle parameter of Phi_{z0}.
struct SzegoData {
    std::vector<cplx> fourier_log;  // c_0 .. c_{M/2}
    double S_value = 0.0;
    bool szego_condition = false;
};

/// Builds SzegoData for f d omega_{z0} from density samples on the grid.
SzegoData make_szego(const NormalizedMap& nm, const BoundaryGrid& grid, std::span<const double> f);
SzegoData make_szego(const NormalizedMap& nm, const BoundaryGrid& grid, const DensitySpec& f);
/// Uses the absolutely continuous part of m, re-expressed against omega_{z0}.
SzegoData make_szego(const NormalizedMap& nm, const DiscretizedMeasure& m);

/// Disk Szego function D(z) = exp(c_0/2 + sum_{k>=1} c_k z^k) for samples of f
/// at angles 2 pi j / M. Returns 0 for a non-Szego weight.
cplx szego_disk(std::span<const double> f_on_circle, cplx z);

/// log R_f(z), the branch that is real at infinity. z = infinity is allowed.
cplx log_outer(const NormalizedMap& nm, const SzegoData& sd, const ExtendedPoint& z);

/// log R_f at the point z with Phi_{z0}(z) = phi_value, |phi_value| >= 1.
cplx log_outer_from_phi(const SzegoData& sd, cplx phi_value);

/// R_f(z); 0 for a non-Szego weight.
cplx outer_on_omega(const NormalizedMap& nm, const SzegoData& sd, const ExtendedPoint& z);

/// Reproducing kernel K_mu(z, w) of H^2(Omega, mu) for finite z, w in Omega.
/// Throws NonSzego.
cplx reproducing_kernel(const NormalizedMap& nm, const SzegoData& sd, cplx z, cplx w);

/// F_{mu,z0,r}(z) = (R_f(z0) / R_f(z))^{1/r}. Throws NonSzego.
cplx limit_target(const NormalizedMap& nm, const SzegoData& sd, double r, const ExtendedPoint& z);

}  // namespace extremal
