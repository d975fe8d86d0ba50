#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace dmlimits {

enum class Exec { serial, parallel };

// Thread budget for parallel kernels. DM_LIMITS_THREADS caps it when set.
int max_threads();

namespace kernels {

template <class F>
void fill_serial(std::span<double> out, F&& f) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(i);
}

template <class F>
void fill_parallel(std::span<double> out, F&& f) {
  const auto count = static_cast<std::ptrdiff_t>(out.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(dmlimits_fill_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

template <class F>
std::vector<double> tabulate(std::size_t count, F&& f, Exec exec) {
  std::vector<double> out(count);
  if (exec == Exec::parallel)
    fill_parallel(out, f);
  else
    fill_serial(out, f);
  return out;
}

// Index of the smallest value, first one on ties. NaN entries are skipped.
std::size_t argmin(std::span<const double> values);

}  // namespace kernels
}  // namespace dmlimits
