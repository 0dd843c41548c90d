#pragma once

#include <cstddef>

#include "dnls/field.hpp"

namespace dnls {

// Thin wrapper over FFTW complex transforms of one fixed size.
//
// forward:  out_k = sum_n in_n e^{-2*pi*i*n*k/m}   (no scaling)
// backward: out_n = sum_k in_k e^{+2*pi*i*n*k/m}   (no scaling)
//
// Buffers are owned and aligned; inputs are copied in and out, so callers may
// pass the same vector for in and out. Instances are not thread-safe; create
// one per thread. Plan creation is internally serialized.
class FftEngine {
 public:
  explicit FftEngine(std::size_t m);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  std::size_t size() const { return m_; }

  void forward(const cvec& in, cvec& out);
  void backward(const cvec& in, cvec& out);

 private:
  std::size_t m_;
  void* plan_fwd_;
  void* plan_bwd_;
  cplx* buf_;

  void run(void* plan, const cvec& in, cvec& out);
};

}  // namespace dnls
