#include "extremal/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace extremal {

namespace {

constexpr int kConstructionGrid = 1024;
constexpr double kMinDerivative = 1e-8;
constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 100;
constexpr double kBoundarySlack = 1e-10;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
    const double d1 = cross(p2 - p1, q1 - p1);
    const double d2 = cross(p2 - p1, q2 - p1);
    const double d3 = cross(q2 - q1, p1 - q1);
    const double d4 = cross(q2 - q1, p2 - q1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Polygon self-intersection test over non-adjacent edges, pruned by bounding boxes.
bool polygon_is_simple(const std::vector<cplx>& pts) {
    const int n = static_cast<int>(pts.size());
    for (int i = 0; i < n; ++i) {
        const cplx a = pts[i];
        const cplx b = pts[(i + 1) % n];
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const cplx c = pts[j];
            const cplx d = pts[(j + 1) % n];
            if (std::max(a.real(), b.real()) < std::min(c.real(), d.real()) ||
                std::max(c.real(), d.real()) < std::min(a.real(), b.real()) ||
                std::max(a.imag(), b.imag()) < std::min(c.imag(), d.imag()) ||
                std::max(c.imag(), d.imag()) < std::min(a.imag(), b.imag()))
                continue;
            if (segments_cross(a, b, c, d)) return false;
        }
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------- ExteriorMap

ExteriorMap::ExteriorMap(double cap, cplx c0, std::vector<cplx> tail, std::string name)
    : cap_(cap), c0_(c0), tail_(std::move(tail)), name_(std::move(name)) {
    if (!(cap_ > 0.0) || !std::isfinite(cap_))
        throw InvalidArgument("exterior map: capacity must be positive, got " + std::to_string(cap_));
    while (!tail_.empty() && tail_.back() == cplx{0.0, 0.0}) tail_.pop_back();

    std::vector<cplx> curve(kConstructionGrid);
    margin_ = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kConstructionGrid; ++j) {
        const cplx w = std::polar(1.0, kTwoPi * j / kConstructionGrid);
        curve[j] = psi(w);
        margin_ = std::min(margin_, std::abs(dpsi(w)));
    }
    if (margin_ < kMinDerivative)
        throw InvalidArgument("exterior map: |Psi'| vanishes on the unit circle (margin " +
                              std::to_string(margin_) + ")");
    if (!polygon_is_simple(curve))
        throw InvalidArgument("exterior map: boundary curve is not simple");
}

ExteriorMap ExteriorMap::disk(double radius, cplx center) {
    return ExteriorMap(radius, center, {}, "disk");
}

ExteriorMap ExteriorMap::ellipse(double c, double d, cplx center) {
    if (!(c > 0.0) || !(std::abs(d) < c))
        throw InvalidArgument("ellipse: need c > 0 and |d| < c");
    return ExteriorMap(c, center, {cplx{d, 0.0}}, "ellipse");
}

ExteriorMap ExteriorMap::perturbed_circle(double cap, cplx c0, std::vector<cplx> tail) {
    double s = 0.0;
    for (std::size_t k = 0; k < tail.size(); ++k) s += static_cast<double>(k + 1) * std::abs(tail[k]);
    if (!(s < cap))
        throw InvalidArgument("perturbed_circle: need sum k|c_k| < cap for univalence");
    return ExteriorMap(cap, c0, std::move(tail), "perturbed_circle");
}

cplx ExteriorMap::psi(cplx w) const noexcept {
    // Horner in 1/w for the tail.
    const cplx u = 1.0 / w;
    cplx acc = 0.0;
    for (auto it = tail_.rbegin(); it != tail_.rend(); ++it) acc = (acc + *it) * u;
    return cap_ * w + c0_ + acc;
}

cplx ExteriorMap::dpsi(cplx w) const noexcept {
    const cplx u = 1.0 / w;
    cplx acc = 0.0;
    // -sum k c_k w^{-k-1}
    for (int k = tail_length(); k >= 1; --k) acc = (acc + static_cast<double>(k) * tail_[k - 1]) * u;
    return cap_ - acc * u;
}

bool ExteriorMap::operator==(const ExteriorMap& other) const noexcept {
    return cap_ == other.cap_ && c0_ == other.c0_ && tail_ == other.tail_;
}

// -------------------------------------------------------------- ExtendedPoint

cplx ExtendedPoint::value() const {
    if (!z_) throw InvalidArgument("point at infinity has no finite value");
    return *z_;
}

std::string ExtendedPoint::to_string() const {
    if (!z_) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << z_->real() << (z_->imag() < 0 ? "" : "+") << z_->imag() << "i";
    return os.str();
}

// ------------------------------------------------------------- NormalizedMap

NormalizedMap::NormalizedMap(ExteriorMap base, ExtendedPoint z0)
    : base_(std::move(base)), z0_(z0) {
    if (z0_.is_infinite()) return;
    const cplx w = invert_phi(base_, z0_.value());
    const double modulus = std::abs(w);
    if (!(modulus > 1.0 + 1e-12))
        throw InsideRegion("normalization point " + z0_.to_string() + " is not strictly outside K");
    alpha_ = -std::arg(w);
    rotation_ = std::polar(1.0, alpha_);
    w0_ = 1.0 / modulus;
}

cplx NormalizedMap::phi(cplx z) const { return rotation_ * invert_phi(base_, z); }

double NormalizedMap::phi_at_z0() const {
    if (z0_.is_infinite()) throw InvalidArgument("Phi_{z0}(z0) is infinite for z0 = inf");
    return 1.0 / w0_;
}

// -------------------------------------------------------------- BoundaryGrid

BoundaryGrid::BoundaryGrid(ExteriorMap map, int M, double theta_offset)
    : map_(std::move(map)), offset_(theta_offset) {
    if (M < 16 || !std::has_single_bit(static_cast<unsigned>(M)))
        throw InvalidArgument("boundary grid size must be a power of two >= 16, got " + std::to_string(M));
    thetas_.resize(M);
    nodes_.resize(M);
    jacobian_.resize(M);
    for (int j = 0; j < M; ++j) {
        thetas_[j] = offset_ + kTwoPi * j / M;
        const cplx w = std::polar(1.0, thetas_[j]);
        nodes_[j] = map_.psi(w);
        jacobian_[j] = std::abs(map_.dpsi(w));
    }
}

int grid_size_for_degree(int n_max) {
    const unsigned need = static_cast<unsigned>(std::max(16, 16 * std::max(n_max, 1)));
    return static_cast<int>(std::bit_ceil(need));
}

// ------------------------------------------------------------------ free ops

cplx eval_psi(const ExteriorMap& map, cplx w) {
    if (std::abs(w) < 1.0 - 1e-12)
        throw InvalidArgument("eval_psi: |w| < 1 is outside the domain of the exterior map");
    return map.psi(w);
}

namespace {

// Winding number of the densely sampled boundary curve around z is nonzero.
bool encircled(const ExteriorMap& map, cplx z) {
    constexpr int kN = 8192;
    double winding = 0.0;
    cplx prev = map.psi(cplx{1.0, 0.0}) - z;
    for (int j = 1; j <= kN; ++j) {
        const cplx cur = map.psi(std::polar(1.0, kTwoPi * j / kN)) - z;
        winding += std::arg(cur / prev);
        prev = cur;
    }
    return std::abs(winding) > kPi;
}

}  // namespace

cplx invert_phi(const ExteriorMap& map, cplx z) {
    const double scale = std::max(1.0, std::abs(z));
    cplx w = (z - map.c0()) / map.cap();
    if (std::abs(w) < 1.0) w = std::abs(w) > 1e-3 ? w / std::abs(w) * 1.05 : cplx{1.05, 0.0};
    double res = std::abs(map.psi(w) - z);
    for (int it = 0; it < kNewtonMaxIter && res > kNewtonTol * scale; ++it) {
        const cplx d = map.dpsi(w);
        if (std::abs(d) < 1e-300) break;
        const cplx step = (map.psi(w) - z) / d;
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            const cplx cand = w - t * step;
            if (std::abs(cand) > 1e-6) {
                const double r = std::abs(map.psi(cand) - z);
                if (r < res) {
                    w = cand;
                    res = r;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    if (!(res <= kNewtonTol * scale)) {
        std::ostringstream os;
        if (encircled(map, z)) {
            // Newton is confined to |w| > 0 and cannot reach preimages deep inside K.
            os << "invert_phi: z = " << z << " lies inside K";
            throw InsideRegion(os.str());
        }
        os << "invert_phi: Newton stalled at residual " << res << " for z = " << z;
        throw NoConvergence(os.str());
    }
    if (std::abs(w) < 1.0 - kBoundarySlack) {
        std::ostringstream os;
        os << "invert_phi: z = " << z << " lies inside K (|w| = " << std::abs(w) << ")";
        throw InsideRegion(os.str());
    }
    return w;
}

cplx phi_derivative(const ExteriorMap& map, cplx z) { return 1.0 / map.dpsi(invert_phi(map, z)); }

double green(const ExteriorMap& map, cplx z) {
    return std::max(0.0, std::log(std::abs(invert_phi(map, z))));
}

double normalized_capacity(const NormalizedMap& nm) {
    if (nm.z0().is_infinite()) return nm.base().cap();
    return nm.w0();
}

namespace {

std::vector<double> poisson_weights(const BoundaryGrid& grid, cplx pole_image) {
    // pole_image = 1 / conj(Phi(z)) inside the unit disk; weights on the
    // circle angles of the grid.
    const int M = grid.size();
    std::vector<double> w(M);
    const double a2 = std::norm(pole_image);
    for (int j = 0; j < M; ++j) {
        const cplx zeta = std::polar(1.0, grid.thetas()[j]);
        w[j] = (1.0 - a2) / std::norm(zeta - pole_image) / M;
    }
    return w;
}

}  // namespace

std::vector<double> harmonic_weights(const NormalizedMap& nm, const BoundaryGrid& grid) {
    if (!(nm.base() == grid.map()))
        throw InvalidArgument("harmonic_weights: grid was built from a different exterior map");
    const int M = grid.size();
    if (nm.z0().is_infinite()) return std::vector<double>(M, 1.0 / M);
    // Angles are in the Phi_inf parameter; in it the pole sits at
    // 1/conj(Phi_inf(z0)) = w0 e^{-i alpha}.
    return poisson_weights(grid, nm.w0() * std::conj(nm.rotation()));
}

std::vector<double> harmonic_weights_at(const ExteriorMap& map, const BoundaryGrid& grid, cplx z) {
    const cplx w = invert_phi(map, z);
    if (!(std::abs(w) > 1.0)) throw InsideRegion("harmonic_weights_at: point is not in Omega");
    return poisson_weights(grid, 1.0 / std::conj(w));
}

bool in_region(const ExteriorMap& map, cplx z) {
    try {
        const cplx w = invert_phi(map, z);
        return std::abs(w) <= 1.0 + 1e-9;
    } catch (const InsideRegion&) {
        return true;
    }
}

}  // namespace extremal
