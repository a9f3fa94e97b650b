#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace extremal::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// One plan per size, created against scratch buffers and executed with the
// new-array interface. Plans live until process exit.
fftw_plan plan_for(int n) {
    static std::map<int, fftw_plan> plans;
    std::lock_guard lock(planner_mutex());
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    auto* in = fftw_alloc_complex(static_cast<std::size_t>(n));
    auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans.emplace(n, p);
    return p;
}

}  // namespace

std::vector<cplx> forward_dft(std::span<const cplx> x) {
    const int n = static_cast<int>(x.size());
    std::vector<cplx> in(x.begin(), x.end());
    std::vector<cplx> out(x.size());
    if (n == 0) return out;
    fftw_plan p = plan_for(n);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace extremal::detail
