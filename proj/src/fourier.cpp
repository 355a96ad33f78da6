#include "branchsolve/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "branchsolve/error.hpp"

namespace branchsolve {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

DftPlan::DftPlan(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("DFT needs at least one dimension");
  for (int d : dims_) {
    if (d < 1) throw DimensionError("DFT dimensions must be positive");
    size_ *= static_cast<std::size_t>(d);
  }
  std::vector<fftw_complex> scratch(size_);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), scratch.data(),
                                scratch.data(), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), scratch.data(),
                                 scratch.data(), FFTW_BACKWARD, flags);
  if (!forward_plan_ || !backward_plan_) throw NumericError("FFTW planning failed");
}

DftPlan::~DftPlan() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void DftPlan::forward(std::span<cplx> data) const {
  if (data.size() != size_) throw DimensionError("DFT buffer has the wrong size");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), p, p);
}

void DftPlan::backward(std::span<cplx> data) const {
  if (data.size() != size_) throw DimensionError("DFT buffer has the wrong size");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), p, p);
}

std::shared_ptr<const DftPlan> dft_plan(const std::vector<int>& dims) {
  static std::mutex cache_mutex;
  // Never destroyed: plans must outlive every static that might still use them.
  static auto* cache = new std::map<std::vector<int>, std::shared_ptr<const DftPlan>>();
  std::lock_guard lock(cache_mutex);
  auto it = cache->find(dims);
  if (it != cache->end()) return it->second;
  auto plan = std::make_shared<const DftPlan>(dims);
  cache->emplace(dims, plan);
  return plan;
}

}  // namespace branchsolve
