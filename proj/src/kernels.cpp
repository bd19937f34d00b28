#include "vvlift/kernels.hpp"

#include <omp.h>

#include <exception>
#include <mutex>

#include "vvlift/induction.hpp"

namespace vvlift {

void set_thread_cap(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

namespace {

inline void conv_row(const std::vector<cplx>& a, const std::vector<Eigen::VectorXcd>& b,
                     Eigen::VectorXcd& acc, std::size_t n) {
  const std::size_t kmax = std::min(n, a.size() - 1);
  for (std::size_t k = n >= b.size() ? n - b.size() + 1 : 0; k <= kmax; ++k)
    if (a[k] != cplx(0)) acc.noalias() += a[k] * b[n - k];
}

// Runs body(i) for i < n in parallel, rethrowing the first exception.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  std::exception_ptr err;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace

void convolve_serial(const std::vector<cplx>& a, const std::vector<Eigen::VectorXcd>& b,
                     std::vector<Eigen::VectorXcd>& out) {
  if (a.empty() || b.empty()) return;
  for (std::size_t n = 0; n < out.size(); ++n) conv_row(a, b, out[n], n);
}

void convolve_parallel(const std::vector<cplx>& a, const std::vector<Eigen::VectorXcd>& b,
                       std::vector<Eigen::VectorXcd>& out) {
  if (a.empty() || b.empty()) return;
  parallel_for(out.size(), [&](std::size_t n) { conv_row(a, b, out[n], n); });
}

std::vector<BlockMonomial> induced_batch_serial(const InducedRep& rho,
                                                const std::vector<ExactMatrix2>& gs) {
  std::vector<BlockMonomial> out;
  out.reserve(gs.size());
  for (const auto& g : gs) out.push_back(rho.evaluate_blocks(g));
  return out;
}

std::vector<BlockMonomial> induced_batch_parallel(const InducedRep& rho,
                                                  const std::vector<ExactMatrix2>& gs) {
  std::vector<BlockMonomial> out(gs.size());
  parallel_for(gs.size(), [&](std::size_t i) { out[i] = rho.evaluate_blocks(gs[i]); });
  return out;
}

std::vector<double> map_serial(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

std::vector<double> map_parallel(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

void run_indexed(std::size_t n, const std::function<void(std::size_t)>& body, bool parallel) {
  if (parallel) {
    parallel_for(n, body);
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace vvlift
