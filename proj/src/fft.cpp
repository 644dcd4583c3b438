#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>

namespace sedlab::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> alloc(std::size_t n) {
  return std::unique_ptr<T[], FftwFree>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {}
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

std::vector<cplx> forward(std::span<const double> in) {
  const std::size_t n = in.size();
  auto buf_in = alloc<double>(n);
  auto buf_out = alloc<fftw_complex>(n / 2 + 1);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(static_cast<int>(n), buf_in.get(), buf_out.get(), FFTW_ESTIMATE));
  }
  std::copy(in.begin(), in.end(), buf_in.get());
  plan->execute();
  std::vector<cplx> out(n / 2 + 1);
  std::memcpy(static_cast<void*>(out.data()), buf_out.get(), sizeof(fftw_complex) * out.size());
  return out;
}

std::vector<double> backward(std::span<const cplx> half, std::size_t n) {
  auto buf_in = alloc<fftw_complex>(n / 2 + 1);
  auto buf_out = alloc<double>(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_c2r_1d(static_cast<int>(n), buf_in.get(), buf_out.get(), FFTW_ESTIMATE));
  }
  std::memset(buf_in.get(), 0, sizeof(fftw_complex) * (n / 2 + 1));
  std::memcpy(buf_in.get(), half.data(), sizeof(fftw_complex) * std::min(half.size(), n / 2 + 1));
  plan->execute();
  return std::vector<double>(buf_out.get(), buf_out.get() + n);
}

std::vector<cplx> complex(std::span<const cplx> in, int sign) {
  const std::size_t n = in.size();
  auto buf_in = alloc<fftw_complex>(n);
  auto buf_out = alloc<fftw_complex>(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(fftw_plan_dft_1d(static_cast<int>(n), buf_in.get(), buf_out.get(),
                                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                                   FFTW_ESTIMATE));
  }
  std::memcpy(buf_in.get(), in.data(), sizeof(fftw_complex) * n);
  plan->execute();
  std::vector<cplx> out(n);
  std::memcpy(static_cast<void*>(out.data()), buf_out.get(), sizeof(fftw_complex) * n);
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace sedlab::fft
