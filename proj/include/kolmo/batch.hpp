#pragma once

// Vectorised entry points.  Each kernel has an OpenMP version and a serial
// reference; both must produce bit-identical output.

#include <span>

#include "kolmo/dist.hpp"
#include "kolmo/quantile.hpp"

namespace kolmo {

// out[i] = kolmogorov(x[i], eps).  Spans must have equal length.
void kolmogorov_batch(std::span<const double> x, std::span<DistTriple> out,
                      double eps = kMachineEpsilon);
void kolmogorov_batch_serial(std::span<const double> x, std::span<DistTriple> out,
                             double eps = kMachineEpsilon);

// out[i] = kolmogi(pairs[i]).
void kolmogi_batch(std::span<const ProbPair> pairs, std::span<QuantileResult> out);
void kolmogi_batch_serial(std::span<const ProbPair> pairs, std::span<QuantileResult> out);

// Threads the OpenMP kernels will use.
int parallel_threads();

}  // namespace kolmo
