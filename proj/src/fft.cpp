#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <new>
#include <utility>

namespace critspec::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void ComplexBuffer::Free::operator()(std::complex<double>* p) const { fftw_free(p); }

ComplexBuffer::ComplexBuffer(std::size_t size) : size_(size) {
  auto* raw = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(size, 1)));
  if (!raw) throw std::bad_alloc();
  data_.reset(raw);
  zero();
}

void ComplexBuffer::zero() { std::fill(data_.get(), data_.get() + size_, std::complex<double>(0.0, 0.0)); }

BatchedFft::BatchedFft(const std::vector<int>& dims, int batch) : points_(1), batch_(batch) {
  for (int d : dims) points_ *= d;
  ComplexBuffer scratch(static_cast<std::size_t>(points_) * batch_);
  auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
  const int rank = static_cast<int>(dims.size());
  // Planning is not thread-safe in FFTW; callers hold planner_mutex().
  forward_plan_ = fftw_plan_many_dft(rank, dims.data(), batch_, data, nullptr, 1, points_, data, nullptr, 1,
                                     points_, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_many_dft(rank, dims.data(), batch_, data, nullptr, 1, points_, data, nullptr, 1,
                                      points_, FFTW_BACKWARD, FFTW_ESTIMATE);
}

BatchedFft::~BatchedFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

std::shared_ptr<const BatchedFft> BatchedFft::get(const std::vector<int>& dims, int batch) {
  // The mutex must outlive the cache: plans lock it on destruction.
  auto& mutex = planner_mutex();
  static std::map<std::pair<std::vector<int>, int>, std::shared_ptr<const BatchedFft>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(dims, batch);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const BatchedFft> plan(new BatchedFft(dims, batch));
  cache.emplace(std::move(key), plan);
  return plan;
}

void BatchedFft::forward(ComplexBuffer& data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), p, p);
}

void BatchedFft::backward(ComplexBuffer& data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), p, p);
}

}  // namespace critspec::detail
