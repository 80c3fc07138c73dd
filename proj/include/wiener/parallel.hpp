#ifndef WIENER_PARALLEL_HPP
#define WIENER_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace wiener {

/// Number of worker threads used by grid loops. Defaults to the value of the
/// WIENER_THREADS environment variable, or 1.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n) split into contiguous chunks. Each index is
/// handled exactly once and bodies must only write to their own slot, so
/// results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace wiener

#endif // WIENER_PARALLEL_HPP
