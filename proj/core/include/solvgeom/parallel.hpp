#pragma once

#include <functional>

namespace solvgeom {

// Worker count: SOLVGEOM_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Calls fn(i) for i in [0, count). Order of execution is unspecified; the
// first exception thrown by any call is rethrown after all workers stop.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace solvgeom
