#include "dnls/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace dnls {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

FftEngine::FftEngine(std::size_t m) : m_(m) {
  if (m == 0) throw std::invalid_argument("fft: size must be positive");
  buf_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * m));
  if (!buf_) throw std::bad_alloc();
  fftw_complex* b = reinterpret_cast<fftw_complex*>(buf_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE keeps the plan choice deterministic for a given size/alignment.
  plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(m), b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(m), b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("fft: plan creation failed");
}

FftEngine::~FftEngine() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(buf_);
}

void FftEngine::run(void* plan, const cvec& in, cvec& out) {
  if (in.size() != m_) throw std::invalid_argument("fft: input size mismatch");
  std::memcpy(buf_, in.data(), sizeof(cplx) * m_);
  fftw_execute(static_cast<fftw_plan>(plan));
  out.resize(m_);
  std::memcpy(out.data(), buf_, sizeof(cplx) * m_);
}

void FftEngine::forward(const cvec& in, cvec& out) { run(plan_fwd_, in, out); }
void FftEngine::backward(const cvec& in, cvec& out) { run(plan_bwd_, in, out); }

}  // namespace dnls
