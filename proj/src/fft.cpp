// SPDX-License-Identifier: Apache-2.0
#include "otfs/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace otfs::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, Direction dir) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, dir);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // Planner is not thread-safe; the scratch buffer only exists for planning.
    auto* scratch = fftw_alloc_complex(n);
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, Direction>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<cplx> data, Direction dir) {
  if (data.size() <= 1) return;
  auto plan = cache().get(data.size(), dir);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

void dft_unitary(std::span<cplx> data) {
  transform(data, Direction::forward);
  const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
  for (auto& v : data) v *= scale;
}

void idft_unitary(std::span<cplx> data) {
  transform(data, Direction::inverse);
  const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
  for (auto& v : data) v *= scale;
}

CVector dft(std::span<const cplx> x) {
  CVector out(x.begin(), x.end());
  dft_unitary(out);
  return out;
}

CVector idft(std::span<const cplx> x) {
  CVector out(x.begin(), x.end());
  idft_unitary(out);
  return out;
}

}  // namespace otfs::fft
