#pragma once

// Thin FFTW wrapper. Plans are created once per (size, direction) and shared;
// the planner is guarded by a mutex, execution with the new-array interface is
// thread-safe.

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <utility>

namespace fracsh::fft {

enum class Direction { forward, backward };

namespace detail {

class PlanCache {
 public:
  PlanCache() = default;
  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, Direction dir) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, dir == Direction::forward ? 0 : 1);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_complex* buffer = fftw_alloc_complex(static_cast<size_t>(n));
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft_1d(n, buffer, buffer, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buffer);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

inline PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace detail

/// Unnormalized in-place DFT: forward uses e^{-2 pi i jn/N}, backward e^{+...}.
inline void transform(std::span<std::complex<double>> data, Direction dir) {
  if (data.empty()) return;
  fftw_plan plan = detail::plan_cache().get(static_cast<int>(data.size()), dir);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace fracsh::fft
