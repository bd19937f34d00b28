#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vvlift/sl2.hpp"

namespace vvlift {

class InducedRep;
struct BlockMonomial;

// Caps the OpenMP team size; 0 leaves the runtime default.
void set_thread_cap(int threads);

// out[n] += sum_k a[k] b[n - k] for n < out.size(). The scalar factor a
// broadcasts over the vector entries of b.
void convolve_serial(const std::vector<cplx>& a, const std::vector<Eigen::VectorXcd>& b,
                     std::vector<Eigen::VectorXcd>& out);
void convolve_parallel(const std::vector<cplx>& a, const std::vector<Eigen::VectorXcd>& b,
                       std::vector<Eigen::VectorXcd>& out);

std::vector<BlockMonomial> induced_batch_serial(const InducedRep& rho,
                                                const std::vector<ExactMatrix2>& gs);
std::vector<BlockMonomial> induced_batch_parallel(const InducedRep& rho,
                                                  const std::vector<ExactMatrix2>& gs);

// results[i] = f(i); the parallel form writes per-index slots only.
std::vector<double> map_serial(std::size_t n, const std::function<double(std::size_t)>& f);
std::vector<double> map_parallel(std::size_t n, const std::function<double(std::size_t)>& f);

// body(i) for i < n; the first exception thrown is rethrown after the loop.
void run_indexed(std::size_t n, const std::function<void(std::size_t)>& body, bool parallel);

}  // namespace vvlift
