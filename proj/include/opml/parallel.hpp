#pragma once

namespace opml::parallel {

/// Sets the OpenMP team size used by all kernels. Results are identical for
/// every thread count; 1 is the reproducibility baseline.
void set_threads(int n);
int threads();
bool openmp_enabled();

}  // namespace opml::parallel
