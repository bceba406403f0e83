// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace dgrd {

/// Thrown when a caller violates a documented precondition: degenerate
/// domains, nonpositive coefficients, malformed configuration and the like.
class invalid_input : public std::runtime_error {
public:
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown for conditions that indicate a bug rather than bad input
/// (singular local Gram matrices, non-SPD norm matrices).
class internal_error : public std::runtime_error {
public:
  explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

/// Format a double with 17 significant digits (round-trip safe).
std::string format17(double v);

/// FNV-1a over raw bytes; used for config/mesh/space fingerprints. The
/// byte-level primitive has its own name so a string literal can never
/// silently bind to the (pointer, length) signature.
std::uint64_t fnv1a_bytes(const void* data, std::size_t n,
                          std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(const std::string& s,
                    std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(double v, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(std::uint64_t v, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Run fn(begin, end) over [0, n) split into contiguous chunks, one per
/// worker. threads <= 1 runs inline. Chunks are a pure partition of the
/// index range, so any per-index output written by fn is identical for
/// every thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace dgrd
