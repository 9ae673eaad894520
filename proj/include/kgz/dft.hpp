#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>

#include "kgz/torus_grid.hpp"

namespace kgz {

/// Complex-to-complex DFT plans for one fixed size, with private work buffers.
///
/// Convention: forward() returns coefficients f_m = (1/N) sum_j f(x_j) e^{-i 2pi m j/N},
/// backward() is its exact inverse (no extra scaling). FFTW's planner is not
/// thread-safe, so plan creation/destruction is serialized on a global mutex;
/// execution uses only this object's buffers.
class Dft {
 public:
  explicit Dft(std::size_t n) : n_(n) {
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    if (in_ == nullptr || out_ == nullptr) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Dft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(in_);
    fftw_free(out_);
  }

  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  std::size_t size() const { return n_; }

  void forward(std::span<const Complex> samples, std::span<Complex> coeffs) {
    check(samples.size(), coeffs.size());
    load(samples);
    fftw_execute(fwd_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t s = 0; s < n_; ++s) {
      coeffs[s] = Complex(out_[s][0] * scale, out_[s][1] * scale);
    }
  }

  void backward(std::span<const Complex> coeffs, std::span<Complex> samples) {
    check(coeffs.size(), samples.size());
    load(coeffs);
    fftw_execute(bwd_);
    for (std::size_t s = 0; s < n_; ++s) {
      samples[s] = Complex(out_[s][0], out_[s][1]);
    }
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  void check(std::size_t a, std::size_t b) const {
    if (a != n_ || b != n_) throw std::invalid_argument("Dft: buffer length mismatch");
  }

  void load(std::span<const Complex> v) {
    for (std::size_t s = 0; s < n_; ++s) {
      in_[s][0] = v[s].real();
      in_[s][1] = v[s].imag();
    }
  }

  std::size_t n_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

/// Per-thread plan cache. Parallel sweeps transform concurrently without
/// sharing FFTW plan state between threads.
inline Dft& dft_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<Dft>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<Dft>(n)).first;
  }
  return *it->second;
}

}  // namespace kgz
