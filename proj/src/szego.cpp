#include "extremal/szego.hpp"

#include <cmath>

#include "fft.hpp"

namespace extremal {

namespace {

// Coefficients c_k = (1/M) sum_j log f_j e^{-i k phi_j}, phi_j = phase + 2 pi j / M.
std::vector<cplx> log_coefficients(std::span<const double> f, double phase) {
    const int M = static_cast<int>(f.size());
    std::vector<cplx> logs(M);
    for (int j = 0; j < M; ++j) logs[j] = std::log(std::max(f[j], kLogFloor));
    const auto spec = detail::forward_dft(logs);
    std::vector<cplx> c(M / 2 + 1);
    for (int k = 0; k <= M / 2; ++k) c[k] = spec[k] / static_cast<double>(M) * std::polar(1.0, -k * phase);
    c[0] = c[0].real();
    return c;
}

// c_0/2 + sum_{k=1}^{M/2-1} c_k z^k + c_{M/2} z^{M/2} / 2. The halved Nyquist
// term makes 2 Re of this sum interpolate log f at the nodes.
cplx half_log_series(const std::vector<cplx>& c, cplx z) {
    const int K = static_cast<int>(c.size()) - 1;
    cplx acc = 0.5 * c[K];
    for (int k = K - 1; k >= 1; --k) acc = acc * z + c[k];
    return 0.5 * c[0] + acc * z;
}

void require_szego(const SzegoData& sd) {
    if (!sd.szego_condition) throw NonSzego("weight does not satisfy the Szego condition");
}

}  // namespace

SzegoData make_szego(const NormalizedMap& nm, const BoundaryGrid& grid, std::span<const double> f) {
    if (static_cast<int>(f.size()) != grid.size()) throw InvalidArgument("make_szego: sample count mismatch");
    if (!(nm.base() == grid.map())) throw InvalidArgument("make_szego: grid belongs to a different map");
    SzegoData sd;
    const auto h = harmonic_weights(nm, grid);
    sd.S_value = entropy_from_values(h, f);
    sd.szego_condition = sd.S_value > 0.0;
    if (!sd.szego_condition) return sd;
    sd.fourier_log = log_coefficients(f, grid.theta_offset() + nm.alpha());
    return sd;
}

SzegoData make_szego(const NormalizedMap& nm, const BoundaryGrid& grid, const DensitySpec& f) {
    const auto values = f.on_grid(grid);
    return make_szego(nm, grid, values);
}

SzegoData make_szego(const NormalizedMap& nm, const DiscretizedMeasure& m) {
    const auto h = harmonic_weights(nm, *m.grid);
    std::vector<double> f(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) f[j] = m.boundary_weights[j] / h[j];
    return make_szego(nm, *m.grid, f);
}

cplx szego_disk(std::span<const double> f_on_circle, cplx z) {
    const int M = static_cast<int>(f_on_circle.size());
    if (M < 2 || (M & (M - 1)) != 0) throw InvalidArgument("szego_disk: sample count must be a power of two");
    if (!(std::abs(z) < 1.0)) throw InvalidArgument("szego_disk: |z| must be < 1");
    std::vector<double> uniform(M, 1.0 / M);
    if (entropy_from_values(uniform, f_on_circle) == 0.0) return 0.0;
    const auto c = log_coefficients(f_on_circle, 0.0);
    return std::exp(half_log_series(c, z));
}

cplx log_outer(const NormalizedMap& nm, const SzegoData& sd, const ExtendedPoint& z) {
    require_szego(sd);
    if (z.is_infinite()) return sd.fourier_log[0];
    return log_outer_from_phi(sd, nm.phi(z.value()));
}

cplx log_outer_from_phi(const SzegoData& sd, cplx phi_value) {
    require_szego(sd);
    const cplx log_d = half_log_series(sd.fourier_log, 1.0 / std::conj(phi_value));
    return 2.0 * std::conj(log_d);
}

cplx outer_on_omega(const NormalizedMap& nm, const SzegoData& sd, const ExtendedPoint& z) {
    if (!sd.szego_condition) return 0.0;
    return std::exp(log_outer(nm, sd, z));
}

cplx reproducing_kernel(const NormalizedMap& nm, const SzegoData& sd, cplx z, cplx w) {
    require_szego(sd);
    const double w0 = nm.w0();
    const cplx pz = nm.phi(z);
    const cplx pw = std::conj(nm.phi(w));
    const cplx half_z = 0.5 * log_outer(nm, sd, z);
    const cplx half_w = std::conj(0.5 * log_outer(nm, sd, w));
    const cplx core = (1.0 - w0 / pz) * (1.0 - w0 / pw) / ((1.0 - w0 * w0) * (1.0 - 1.0 / (pz * pw)));
    return std::exp(-half_z - half_w) * core;
}

cplx limit_target(const NormalizedMap& nm, const SzegoData& sd, double r, const ExtendedPoint& z) {
    require_szego(sd);
    if (!(r > 0.0)) throw InvalidArgument("limit_target: r must be positive");
    return std::exp((log_outer(nm, sd, nm.z0()) - log_outer(nm, sd, z)) / r);
}

}  // namespace extremal
