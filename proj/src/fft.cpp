#include "newman/detail/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <utility>

namespace newman::detail {
namespace {

// FFTW planning is not thread-safe; execution with an existing plan is.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, Direction dir) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, dir);
        if (const auto it = plans_.find(key); it != plans_.end()) return it->second;
        auto* buf = fftw_alloc_complex(n);
        if (!buf) throw std::bad_alloc();
        const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        if (!plan) throw std::bad_alloc();
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, Direction>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void dft_inplace(std::span<std::complex<double>> data, Direction dir) {
    if (data.size() <= 1) return;
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(cache().get(data.size(), dir), p, p);
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> data, Direction dir) {
    std::vector<std::complex<double>> out(data.begin(), data.end());
    dft_inplace(out, dir);
    return out;
}

}  // namespace newman::detail
