#pragma once

// Thin RAII wrapper over FFTW's complex DFT. Plan creation and destruction go
// through a process-wide mutex because the FFTW planner is not reentrant;
// executing a plan on its own buffers is.

#include <szegolab/seq_core.hpp>

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <span>

namespace szegolab::fft {

namespace detail {
inline std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace detail

enum class Direction { Forward = FFTW_FORWARD, Backward = FFTW_BACKWARD };

/// Unnormalized DFT: Forward computes X_k = sum_j x_j e^{-2 pi i jk/M},
/// Backward the same with e^{+2 pi i jk/M}.
inline CVec transform(std::span<const cplx> in, Direction dir)
{
    const int n = static_cast<int>(in.size());
    CVec data(in.begin(), in.end());
    CVec out(in.size());
    auto* src = reinterpret_cast<fftw_complex*>(data.data());
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard lock(detail::planner_mutex());
        plan = fftw_plan_dft_1d(n, src, dst, static_cast<int>(dir), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(detail::planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace szegolab::fft
