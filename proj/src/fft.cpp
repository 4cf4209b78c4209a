#include "bdi/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace bdi {

namespace {
// FFTW planning is not thread-safe; execution of a plan is.
std::mutex g_plan_mutex;
}  // namespace

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  if (data.empty()) throw std::invalid_argument("fft size must be positive");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(g_plan_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf,
                            inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  std::lock_guard lock(g_plan_mutex);
  fftw_destroy_plan(plan);
}

}  // namespace bdi
