#include "extremal/kernels.hpp"

#include <cmath>
#include <vector>

#include "extremal/faber.hpp"

namespace extremal::kernels {

namespace {

int chunk_count(Eigen::Index rows) { return static_cast<int>((rows + kChunk - 1) / kChunk); }

void check_sizes(Eigen::Index rows, std::size_t w) {
    if (static_cast<std::size_t>(rows) != w) throw InvalidArgument("kernel: row/weight size mismatch");
}

// |v|^r with the convention 0^r = 0 for r > 0; r == 2 avoids pow.
double abs_pow(cplx v, double r) {
    if (r == 2.0) return std::norm(v);
    const double a = std::abs(v);
    return a == 0.0 ? 0.0 : std::pow(a, r);
}

}  // namespace

Eigen::MatrixXcd faber_basis(const ExteriorMap& map, std::span<const cplx> points, int n) {
    const auto rows = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXcd V(rows, n + 1);
    std::vector<cplx> buf;
#pragma omp parallel for schedule(static) private(buf) if (rows > 4 * kChunk)
    for (Eigen::Index i = 0; i < rows; ++i) {
        buf.resize(n + 1);
        faber_values(map, points[i], buf);
        for (int k = 0; k <= n; ++k) V(i, k) = buf[k];
    }
    return V;
}

Eigen::MatrixXcd monomial_basis(std::span<const cplx> points, int n) {
    const auto rows = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXcd V(rows, n + 1);
#pragma omp parallel for schedule(static) if (rows > 4 * kChunk)
    for (Eigen::Index i = 0; i < rows; ++i) {
        cplx p = 1.0;
        for (int k = 0; k <= n; ++k) {
            V(i, k) = p;
            p *= points[i];
        }
    }
    return V;
}

Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXcd& V, std::span<const double> w) {
    check_sizes(V.rows(), w.size());
    const int chunks = chunk_count(V.rows());
    const Eigen::Index cols = V.cols();
    std::vector<Eigen::MatrixXcd> partial(chunks);
#pragma omp parallel for schedule(static) if (chunks > 4)
    for (int c = 0; c < chunks; ++c) {
        const Eigen::Index begin = static_cast<Eigen::Index>(c) * kChunk;
        const Eigen::Index len = std::min<Eigen::Index>(kChunk, V.rows() - begin);
        const auto block = V.middleRows(begin, len);
        const Eigen::Map<const Eigen::VectorXd> wc(w.data() + begin, len);
        Eigen::MatrixXcd scaled = wc.cast<cplx>().asDiagonal() * block;
        partial[c] = block.adjoint() * scaled;
    }
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(cols, cols);
    for (const auto& p : partial) G += p;
    return G;
}

double weighted_power_sum(const Eigen::VectorXcd& values, std::span<const double> w, double r) {
    check_sizes(values.size(), w.size());
    const int chunks = chunk_count(values.size());
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static) if (chunks > 4)
    for (int c = 0; c < chunks; ++c) {
        const Eigen::Index begin = static_cast<Eigen::Index>(c) * kChunk;
        const Eigen::Index end = std::min<Eigen::Index>(begin + kChunk, values.size());
        double s = 0.0;
        for (Eigen::Index i = begin; i < end; ++i)
            if (w[i] != 0.0) s += w[i] * abs_pow(values[i], r);
        partial[c] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double weighted_log_sum(std::span<const double> w, std::span<const double> f, double floor) {
    if (w.size() != f.size()) throw InvalidArgument("kernel: weight/value size mismatch");
    const int chunks = chunk_count(static_cast<Eigen::Index>(w.size()));
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static) if (chunks > 4)
    for (int c = 0; c < chunks; ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
        const std::size_t end = std::min(begin + kChunk, w.size());
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += w[i] * std::log(std::max(f[i], floor));
        partial[c] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

std::pair<double, int> max_weighted_abs(const Eigen::VectorXcd& values, std::span<const double> rho) {
    check_sizes(values.size(), rho.size());
    const int chunks = chunk_count(values.size());
    std::vector<std::pair<double, int>> partial(chunks, {-1.0, -1});
#pragma omp parallel for schedule(static) if (chunks > 4)
    for (int c = 0; c < chunks; ++c) {
        const Eigen::Index begin = static_cast<Eigen::Index>(c) * kChunk;
        const Eigen::Index end = std::min<Eigen::Index>(begin + kChunk, values.size());
        std::pair<double, int> best{-1.0, -1};
        for (Eigen::Index i = begin; i < end; ++i) {
            const double v = rho[i] * std::abs(values[i]);
            if (v > best.first) best = {v, static_cast<int>(i)};
        }
        partial[c] = best;
    }
    std::pair<double, int> best{-1.0, -1};
    for (const auto& p : partial)
        if (p.first > best.first) best = p;
    return best;
}

// ------------------------------------------------------------------ serial

namespace serial {

Eigen::MatrixXcd faber_basis(const ExteriorMap& map, std::span<const cplx> points, int n) {
    Eigen::MatrixXcd V(static_cast<Eigen::Index>(points.size()), n + 1);
    std::vector<cplx> buf(n + 1);
    for (std::size_t i = 0; i < points.size(); ++i) {
        faber_values(map, points[i], buf);
        for (int k = 0; k <= n; ++k) V(static_cast<Eigen::Index>(i), k) = buf[k];
    }
    return V;
}

Eigen::MatrixXcd monomial_basis(std::span<const cplx> points, int n) {
    Eigen::MatrixXcd V(static_cast<Eigen::Index>(points.size()), n + 1);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (int k = 0; k <= n; ++k) V(static_cast<Eigen::Index>(i), k) = std::pow(points[i], k);
    return V;
}

Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXcd& V, std::span<const double> w) {
    check_sizes(V.rows(), w.size());
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(V.cols(), V.cols());
    for (Eigen::Index k = 0; k < V.cols(); ++k)
        for (Eigen::Index l = 0; l < V.cols(); ++l) {
            cplx s = 0.0;
            for (Eigen::Index i = 0; i < V.rows(); ++i) s += w[i] * std::conj(V(i, k)) * V(i, l);
            G(k, l) = s;
        }
    return G;
}

double weighted_power_sum(const Eigen::VectorXcd& values, std::span<const double> w, double r) {
    check_sizes(values.size(), w.size());
    double s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (w[i] != 0.0) s += w[i] * abs_pow(values[i], r);
    return s;
}

double weighted_log_sum(std::span<const double> w, std::span<const double> f, double floor) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::log(std::max(f[i], floor));
    return s;
}

std::pair<double, int> max_weighted_abs(const Eigen::VectorXcd& values, std::span<const double> rho) {
    std::pair<double, int> best{-1.0, -1};
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = rho[i] * std::abs(values[i]);
        if (v > best.first) best = {v, static_cast<int>(i)};
    }
    return best;
}

}  // namespace serial

}  // namespace extremal::kernels
