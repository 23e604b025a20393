// SPDX-License-Identifier: Apache-2.0
#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "fft_plan.hpp"

namespace tentflow::detail {
namespace {

// Plans are created once per shape and executed through the new-array
// interface, which FFTW documents as thread-safe.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int n, bool forward) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(dim, n, forward);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    int dims[3] = {n, n, n};
    std::size_t real_size = 1;
    for (int a = 0; a < dim; ++a) real_size *= static_cast<std::size_t>(n);
    const std::size_t half = real_size / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(half);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = forward ? fftw_plan_dft_r2c(dim, dims, r, c, flags)
                             : fftw_plan_dft_c2r(dim, dims, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (plan == nullptr) throw std::runtime_error("fft: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void forward_r2c(const PeriodicGrid& grid, const double* in, std::complex<double>* out) {
  fftw_plan plan = cache().get(grid.dim(), grid.points_per_axis(), true);
  // r2c does not modify its input.
  fftw_execute_dft_r2c(plan, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void inverse_c2r(const PeriodicGrid& grid, std::complex<double>* in, double* out) {
  fftw_plan plan = cache().get(grid.dim(), grid.points_per_axis(), false);
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace tentflow::detail
