#pragma once

// Runtime switch between the serial reference kernels and the OpenMP ones.
// Controlled by SSCLUST_THREADS: unset -> parallel with the OpenMP default
// team size, "1" -> serial, N -> parallel with N threads.

namespace ssc::parallel {

bool enabled();
void set_enabled(bool on);
int max_threads();

}  // namespace ssc::parallel
