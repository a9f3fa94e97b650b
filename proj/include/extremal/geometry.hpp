#pragma once

#include <optional>
#include <string>
#include <vector>

#include "extremal/types.hpp"

namespace extremal {

/// Exterior conformal map of a Jordan region K, stored as the finite Laurent
/// series Psi(w) = cap*w + c0 + sum_{k=1..L} tail[k-1] * w^{-k} on |w| >= 1.
/// Psi maps the exterior of the unit disk onto Omega = complement of K and
/// fixes infinity; its inverse is Phi_inf.
class ExteriorMap {
public:
    /// Validates cap > 0 and that the boundary curve is simple with
    /// |Psi'| >= 1e-8 on a 1024-point construction grid.
    ExteriorMap(double cap, cplx c0, std::vector<cplx> tail, std::string name = "custom");

    static ExteriorMap disk(double radius, cplx center = 0.0);
    /// Psi(w) = c*w + d/w: ellipse with semi-axes c + d, c - d (d real).
    static ExteriorMap ellipse(double c, double d, cplx center = 0.0);
    /// Requires sum k*|c_k| < cap, which makes Psi univalent on |w| >= 1.
    static ExteriorMap perturbed_circle(double cap, cplx c0, std::vector<cplx> tail);

    double cap() const noexcept { return cap_; }
    cplx c0() const noexcept { return c0_; }
    const std::vector<cplx>& tail() const noexcept { return tail_; }
    int tail_length() const noexcept { return static_cast<int>(tail_.size()); }
    double smoothness_margin() const noexcept { return margin_; }
    const std::string& name() const noexcept { return name_; }

    /// Unchecked series evaluation (valid for any w != 0).
    cplx psi(cplx w) const noexcept;
    cplx dpsi(cplx w) const noexcept;

    bool operator==(const ExteriorMap& other) const noexcept;

private:
    double cap_;
    cplx c0_;
    std::vector<cplx> tail_;
    double margin_ = 0.0;
    std::string name_;
};

/// A point of the extended complex plane: finite or infinity.
class ExtendedPoint {
public:
    ExtendedPoint() = default;  // infinity
    ExtendedPoint(cplx z) : z_(z) {}  // NOLINT(google-explicit-constructor)

    static ExtendedPoint infinity() { return {}; }

    bool is_infinite() const noexcept { return !z_.has_value(); }
    cplx value() const;

    std::string to_string() const;

private:
    std::optional<cplx> z_;
};

/// Phi_{z0} = e^{i alpha} Phi_inf, rotated so that Phi_{z0}(z0) > 0.
class NormalizedMap {
public:
    /// Throws InsideRegion unless z0 lies strictly outside K.
    NormalizedMap(ExteriorMap base, ExtendedPoint z0);

    const ExteriorMap& base() const noexcept { return base_; }
    const ExtendedPoint& z0() const noexcept { return z0_; }
    cplx rotation() const noexcept { return rotation_; }
    double alpha() const noexcept { return alpha_; }
    /// 1 / Phi_{z0}(z0) in [0, 1); zero at infinity.
    double w0() const noexcept { return w0_; }

    /// Phi_{z0}(z); throws like invert_phi.
    cplx phi(cplx z) const;
    /// Phi_{z0}(z0) for finite z0.
    double phi_at_z0() const;

private:
    ExteriorMap base_;
    ExtendedPoint z0_;
    cplx rotation_{1.0, 0.0};
    double alpha_ = 0.0;
    double w0_ = 0.0;
};

/// Uniform samples of the boundary curve: z_j = Psi(e^{i theta_j}),
/// theta_j = offset + 2 pi j / M.
class BoundaryGrid {
public:
    /// M must be a power of two, at least 16.
    BoundaryGrid(ExteriorMap map, int M, double theta_offset = 0.0);

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    const ExteriorMap& map() const noexcept { return map_; }
    double theta_offset() const noexcept { return offset_; }
    const std::vector<double>& thetas() const noexcept { return thetas_; }
    const std::vector<cplx>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& jacobian() const noexcept { return jacobian_; }

    /// Largest degree the grid supports under the M >= 16 n rule.
    int max_degree() const noexcept { return size() / 16; }

private:
    ExteriorMap map_;
    double offset_;
    std::vector<double> thetas_;
    std::vector<cplx> nodes_;
    std::vector<double> jacobian_;
};

/// Smallest power of two >= max(16, 16 * n_max).
int grid_size_for_degree(int n_max);

cplx eval_psi(const ExteriorMap& map, cplx w);

/// Newton inversion of Psi. Returns w with |Psi(w) - z| <= 1e-12 max(1, |z|).
/// Throws InsideRegion when the converged preimage has |w| < 1 - 1e-10 and
/// NoConvergence when the residual stalls.
cplx invert_phi(const ExteriorMap& map, cplx z);

/// Phi_inf'(z) = 1 / Psi'(Phi_inf(z)).
cplx phi_derivative(const ExteriorMap& map, cplx z);

/// Green function of Omega with pole at infinity, log|Phi_inf(z)|.
double green(const ExteriorMap& map, cplx z);

/// C(K, z0): 1/Phi_{z0}(z0) for finite z0, the logarithmic capacity at infinity.
double normalized_capacity(const NormalizedMap& nm);

/// Harmonic measure of z0 discretized on the grid: the Poisson kernel
/// P(w0, e^{i(theta_j + alpha)}) / M.
std::vector<double> harmonic_weights(const NormalizedMap& nm, const BoundaryGrid& grid);

/// Harmonic measure weights for an arbitrary point z of Omega (not only z0).
std::vector<double> harmonic_weights_at(const ExteriorMap& map, const BoundaryGrid& grid, cplx z);

/// Whether z lies in the compact region K (interior or boundary, with the
/// boundary tolerance 1e-9 in |Phi_inf|).
bool in_region(const ExteriorMap& map, cplx z);

}  // namespace extremal
