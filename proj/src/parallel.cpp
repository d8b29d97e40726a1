#include "ssc/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ssc::parallel {

namespace {

// -1 = decide from the environment, 0 = off, 1 = on
std::atomic<int> g_override{-1};

bool env_enabled() {
#ifndef _OPENMP
  return false;
#else
  const char* v = std::getenv("SSCLUST_THREADS");
  if (v == nullptr) return true;
  const std::string s(v);
  if (s == "1" || s == "0") return false;
  const int n = std::atoi(v);
  if (n > 1) omp_set_num_threads(n);
  return true;
#endif
}

}  // namespace

bool enabled() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return o != 0;
  static const bool from_env = env_enabled();
  return from_env;
}

void set_enabled(bool on) { g_override.store(on ? 1 : 0, std::memory_order_relaxed); }

int max_threads() {
#ifdef _OPENMP
  return enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

}  // namespace ssc::parallel
