#include "otfs/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace otfs::fft {
namespace {

// FFTW planning is not thread safe but executing an existing plan on new
// arrays is, so plans are created once under a lock and shared.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, Direction dir) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, dir == Direction::forward);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (!p) throw std::runtime_error("fftw planning failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void transform(std::span<const Complex> in, std::span<Complex> out, Direction dir) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  const std::size_t n = in.size();
  if (n == 0) return;
  if (in.data() == out.data()) {
    transform_inplace(out, dir);
    return;
  }
  fftw_plan p = cache().get(n, dir);
  // fftw never writes to the input of an out-of-place 1-D complex plan
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  fftw_execute_dft(p, src, reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
}

void transform_inplace(std::span<Complex> x, Direction dir) {
  thread_local CVector buf;
  buf.assign(x.begin(), x.end());
  transform(buf, x, dir);
}

}  // namespace otfs::fft
