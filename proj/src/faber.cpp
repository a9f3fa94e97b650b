#include "extremal/faber.hpp"

#include <bit>
#include <cmath>
#include <mutex>

#include "fft.hpp"

namespace extremal {

const char* to_string(Basis b) noexcept { return b == Basis::Faber ? "faber" : "monomial"; }

const char* to_string(Normalization n) noexcept {
    switch (n) {
        case Normalization::Point: return "point";
        case Normalization::Monic: return "monic";
        default: return "none";
    }
}

void faber_values(const ExteriorMap& map, cplx z, std::span<cplx> out) {
    if (out.empty()) return;
    const auto& tail = map.tail();
    const int L = map.tail_length();
    const double inv_cap = 1.0 / map.cap();
    const cplx shifted = z - map.c0();
    out[0] = 1.0;
    const int n = static_cast<int>(out.size()) - 1;
    for (int m = 0; m < n; ++m) {
        cplx next = shifted * out[m];
        const int kmax = std::min(m, L);
        for (int k = 1; k <= kmax; ++k) next -= tail[k - 1] * out[m - k];
        if (m >= 1 && m <= L) next -= static_cast<double>(m) * tail[m - 1];
        out[m + 1] = next * inv_cap;
    }
}

PolynomialC faber(const ExteriorMap& map, int n, int dft_size, double lift) {
    if (n < 0) throw InvalidArgument("faber: degree must be non-negative");
    if (!(lift >= 1.0)) throw InvalidArgument("faber: level-curve radius must be >= 1");
    const int L = map.tail_length();
    int N = dft_size;
    if (N == 0) {
        const unsigned need = static_cast<unsigned>(std::max({64, 16 * n, 2 * n * (L + 1) + 2}));
        N = static_cast<int>(std::bit_ceil(need));
    } else if (16 * n > N) {
        throw DegreeTooLargeForGrid("faber: degree " + std::to_string(n) + " needs at least " +
                                    std::to_string(16 * n) + " samples, got " + std::to_string(N));
    }

    // Laurent coefficients p[j][m] (m = 0..j) of Psi(w)^j, read off the DFT
    // of samples on |w| = lift.
    std::vector<cplx> samples(N), power(N, cplx{1.0, 0.0});
    for (int l = 0; l < N; ++l) samples[l] = map.psi(std::polar(lift, kTwoPi * l / N));
    std::vector<std::vector<cplx>> p(n + 1);
    for (int j = 0; j <= n; ++j) {
        if (j > 0)
            for (int l = 0; l < N; ++l) power[l] *= samples[l];
        const auto spec = detail::forward_dft(power);
        p[j].resize(j + 1);
        double rm = 1.0;
        for (int m = 0; m <= j; ++m) {
            p[j][m] = spec[m] / (static_cast<double>(N) * rm);
            rm *= lift;
        }
    }

    // Polynomial part of Phi^n = w^n: sum_{j>=m} a_j p[j][m] = delta_{mn}.
    std::vector<cplx> a(n + 1);
    for (int m = n; m >= 0; --m) {
        cplx rhs = (m == n) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        for (int j = m + 1; j <= n; ++j) rhs -= a[j] * p[j][m];
        a[m] = rhs / p[m][m];
    }
    PolynomialC poly;
    poly.basis = Basis::Monomial;
    poly.coeffs = std::move(a);
    return poly;
}

std::vector<cplx> FaberTable::coefficients(int n) const {
    {
        std::shared_lock lock(mutex_);
        if (n < static_cast<int>(table_.size()) && !table_[n].empty()) return table_[n];
    }
    auto coeffs = faber(map_, n).coeffs;
    std::unique_lock lock(mutex_);
    if (n >= static_cast<int>(table_.size())) table_.resize(n + 1);
    if (table_[n].empty()) table_[n] = coeffs;
    return table_[n];
}

// ------------------------------------------------------------- PolynomialC

cplx PolynomialC::operator()(cplx z) const {
    if (coeffs.empty()) return 0.0;
    if (basis == Basis::Monomial) {
        cplx acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
        return acc;
    }
    if (!map) throw InvalidArgument("Faber-basis polynomial without an exterior map");
    std::vector<cplx> f(coeffs.size());
    faber_values(*map, z, f);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) acc += coeffs[k] * f[k];
    return acc;
}

PolynomialC PolynomialC::to_monomial() const {
    if (basis == Basis::Monomial) return *this;
    if (!map) throw InvalidArgument("Faber-basis polynomial without an exterior map");
    FaberTable table(*map);
    PolynomialC out;
    out.basis = Basis::Monomial;
    out.normalization = normalization;
    out.z0 = z0;
    out.coeffs.assign(coeffs.size(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == cplx{0.0, 0.0}) continue;
        const auto fk = table.coefficients(static_cast<int>(k));
        for (std::size_t i = 0; i < fk.size(); ++i) out.coeffs[i] += coeffs[k] * fk[i];
    }
    return out;
}

cplx PolynomialC::leading_monomial_coefficient() const {
    if (coeffs.empty()) return 0.0;
    if (basis == Basis::Monomial) return coeffs.back();
    return coeffs.back() * std::pow(map->cap(), -static_cast<double>(degree()));
}

cplx PolynomialC::derivative(cplx z) const {
    const auto mono = to_monomial();
    cplx acc = 0.0;
    for (int k = mono.degree(); k >= 1; --k) acc = acc * z + static_cast<double>(k) * mono.coeffs[k];
    return acc;
}

// ------------------------------------------------------------- faber_trial

FaberTrial faber_trial(const NormalizedMap& nm, const PolynomialC& circle_minimizer, int n) {
    if (circle_minimizer.basis != Basis::Monomial)
        throw InvalidArgument("faber_trial: circle minimizer must be in the monomial basis");
    const int m = circle_minimizer.degree();
    if (m < 0 || n < m) throw InvalidArgument("faber_trial: need 0 <= m <= n");

    auto map = std::make_shared<const ExteriorMap>(nm.base());
    FaberTrial out;
    out.raw.basis = Basis::Faber;
    out.raw.map = map;
    out.raw.coeffs.assign(n + 1, cplx{0.0, 0.0});
    // F_k of Phi_{z0} is e^{i k alpha} F_k of Phi_inf.
    for (int j = 0; j <= m; ++j)
        out.raw.coeffs[n - j] = std::conj(circle_minimizer.coeffs[j]) * std::polar(1.0, (n - j) * nm.alpha());

    out.normalized = out.raw;
    if (nm.z0().is_infinite()) {
        // w0 = 0 forces a_0 = 1, so cap^n q_n is monic.
        const double s = std::pow(map->cap(), static_cast<double>(n));
        for (auto& c : out.normalized.coeffs) c *= s;
        out.normalized.normalization = Normalization::Monic;
    } else {
        const cplx v = out.raw(nm.z0().value());
        if (std::abs(v) == 0.0) throw InvalidArgument("faber_trial: trial polynomial vanishes at z0");
        for (auto& c : out.normalized.coeffs) c /= v;
        out.normalized.normalization = Normalization::Point;
        out.normalized.z0 = nm.z0().value();
    }
    return out;
}

}  // namespace extremal
