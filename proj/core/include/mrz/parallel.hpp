#ifndef MRZ_PARALLEL_HPP
#define MRZ_PARALLEL_HPP

#include <functional>

namespace mrz {

// Effective worker count: `requested` when positive, otherwise the
// MRZ_THREADS environment variable, otherwise hardware concurrency.
int thread_count(int requested);

// Runs fn(i) for i in [0, n) on static chunks. Callers keep determinism by
// writing only to slot i; the schedule never influences results.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

}  // namespace mrz

#endif  // MRZ_PARALLEL_HPP
