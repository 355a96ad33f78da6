#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace branchsolve {

using cplx = std::complex<double>;

/// Unnormalised in-place complex DFT over a row-major multi-dimensional
/// array. Plans are created once per shape and shared; executing a plan is
/// safe from several threads at once.
class DftPlan {
 public:
  explicit DftPlan(std::vector<int> dims);
  ~DftPlan();
  DftPlan(const DftPlan&) = delete;
  DftPlan& operator=(const DftPlan&) = delete;

  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return size_; }
  /// data[k] <- sum_j data[j] exp(-2 pi i j.k / N)
  void forward(std::span<cplx> data) const;
  /// data[j] <- sum_k data[k] exp(+2 pi i j.k / N)
  void backward(std::span<cplx> data) const;

 private:
  std::vector<int> dims_;
  std::size_t size_ = 1;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

std::shared_ptr<const DftPlan> dft_plan(const std::vector<int>& dims);

/// Signed frequency of DFT index i for length n: 0..ceil(n/2)-1, then negative.
/// For even n the Nyquist index n/2 maps to -n/2.
inline int signed_frequency(int i, int n) { return i <= (n - 1) / 2 ? i : i - n; }
inline bool is_nyquist(int freq, int n) { return n % 2 == 0 && 2 * std::abs(freq) == n; }

}  // namespace branchsolve
