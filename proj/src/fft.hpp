#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace critspec::detail {

// fftw_malloc-backed complex buffer (FFTW new-array execution requires the
// alignment it guarantees).
class ComplexBuffer {
 public:
  explicit ComplexBuffer(std::size_t size);
  ComplexBuffer(ComplexBuffer&&) noexcept = default;
  ComplexBuffer& operator=(ComplexBuffer&&) noexcept = default;

  std::complex<double>* data() { return data_.get(); }
  const std::complex<double>* data() const { return data_.get(); }
  std::size_t size() const { return size_; }
  std::complex<double>& operator[](std::size_t i) { return data_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return data_[i]; }
  void zero();

 private:
  struct Free {
    void operator()(std::complex<double>* p) const;
  };
  std::unique_ptr<std::complex<double>[], Free> data_;
  std::size_t size_;
};

// In-place batched multi-dimensional complex DFT: `batch` contiguous grids of
// shape `dims` (row-major). Unnormalized in both directions. Plans are shared
// through a process-wide cache; execution is reentrant.
class BatchedFft {
 public:
  static std::shared_ptr<const BatchedFft> get(const std::vector<int>& dims, int batch);
  ~BatchedFft();

  int points() const { return points_; }
  int batch() const { return batch_; }
  ComplexBuffer make_buffer() const { return ComplexBuffer(static_cast<std::size_t>(points_) * batch_); }

  void forward(ComplexBuffer& data) const;   // sum_j x_j e^{-2 pi i k.j/G}
  void backward(ComplexBuffer& data) const;  // sum_k X_k e^{+2 pi i k.j/G}

 private:
  BatchedFft(const std::vector<int>& dims, int batch);

  int points_;
  int batch_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace critspec::detail
