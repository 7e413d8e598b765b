#include "kolmo/batch.hpp"

#include <omp.h>

#include <cstddef>

#include "kolmo/errors.hpp"

namespace kolmo {

namespace {

template <typename In, typename Out>
void check_sizes(std::span<In> in, std::span<Out> out) {
  if (in.size() != out.size()) throw DomainError("batch: input and output lengths differ");
}

}  // namespace

void kolmogorov_batch(std::span<const double> x, std::span<DistTriple> out, double eps) {
  check_sizes(x, out);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = kolmogorov(x[i], eps);
  }
}

void kolmogorov_batch_serial(std::span<const double> x, std::span<DistTriple> out,
                             double eps) {
  check_sizes(x, out);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = kolmogorov(x[i], eps);
}

void kolmogi_batch(std::span<const ProbPair> pairs, std::span<QuantileResult> out) {
  check_sizes(pairs, out);
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
  // Iteration counts vary with p; dynamic keeps threads busy.
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = kolmogi(pairs[i]);
  }
}

void kolmogi_batch_serial(std::span<const ProbPair> pairs, std::span<QuantileResult> out) {
  check_sizes(pairs, out);
  for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = kolmogi(pairs[i]);
}

int parallel_threads() { return omp_get_max_threads(); }

}  // namespace kolmo
