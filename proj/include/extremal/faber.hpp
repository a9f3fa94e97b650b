#pragma once

#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

#include "extremal/geometry.hpp"

namespace extremal {

enum class Basis { Monomial, Faber };
enum class Normalization { None, Point, Monic };

const char* to_string(Basis b) noexcept;
const char* to_string(Normalization n) noexcept;

/// Complex polynomial in ascending coefficients of either the monomial basis
/// or the Faber basis of `map`.
struct PolynomialC {
    Basis basis = Basis::Monomial;
    std::vector<cplx> coeffs;
    Normalization normalization = Normalization::None;
    cplx z0{};                               // meaningful for Normalization::Point
    std::shared_ptr<const ExteriorMap> map;  // required for Basis::Faber

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    cplx operator()(cplx z) const;
    /// Same polynomial expanded in monomials.
    PolynomialC to_monomial() const;
    cplx leading_monomial_coefficient() const;
    /// Derivative at z, via the monomial expansion.
    cplx derivative(cplx z) const;
};

/// F_0(z), ..., F_n(z) by the Laurent-coefficient recurrence
/// c F_{m+1} = (z - c0) F_m - sum_{k=1..m} c_k F_{m-k} - m c_m.
void faber_values(const ExteriorMap& map, cplx z, std::span<cplx> out);

/// n-th Faber polynomial in the monomial basis, extracted from the Laurent
/// data of Psi^j sampled on the level curve |w| = lift. `dft_size` 0 picks
/// a power of two large enough for alias-free extraction; an explicit size
/// must satisfy 16 n <= dft_size.
PolynomialC faber(const ExteriorMap& map, int n, int dft_size = 0, double lift = 1.3);

/// Append-only table of Faber monomial coefficients for one map, safe for
/// concurrent readers.
class FaberTable {
public:
    explicit FaberTable(ExteriorMap map) : map_(std::move(map)) {}

    /// Monomial coefficients of F_n (copy, so the table may grow meanwhile).
    std::vector<cplx> coefficients(int n) const;
    const ExteriorMap& map() const noexcept { return map_; }

private:
    ExteriorMap map_;
    mutable std::shared_mutex mutex_;
    mutable std::vector<std::vector<cplx>> table_;
};

struct FaberTrial {
    PolynomialC raw;         // sum_j a_j F_{n-j}
    PolynomialC normalized;  // POINT(z0) or MONIC
};

/// Trial polynomial built from a degree-m circle minimizer p(w) = sum conj(a_j) w^j
/// normalized at w0: q_n = sum_j a_j F_{n-j}.
FaberTrial faber_trial(const NormalizedMap& nm, const PolynomialC& circle_minimizer, int n);

}  // namespace extremal
