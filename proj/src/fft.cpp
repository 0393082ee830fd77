#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace qwgw::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void fft2(std::vector<Complex>& data, int l1, int l2, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    // Only fftw_execute is thread safe; planning and destruction are not.
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(l1, l2, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace qwgw::detail
