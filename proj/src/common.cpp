// SPDX-License-Identifier: Apache-2.0
#include "dgrd/common.hpp"

#include <cstdio>
#include <cstring>
#include <thread>
#include <vector>

namespace dgrd {

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a_bytes(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
  return fnv1a_bytes(s.data(), s.size(), h);
}

std::uint64_t fnv1a(double v, std::uint64_t h) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  return fnv1a_bytes(&bits, sizeof(bits), h);
}

std::uint64_t fnv1a(std::uint64_t v, std::uint64_t h) {
  return fnv1a_bytes(&v, sizeof(v), h);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    fn(0, n);
    return;
  }
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  const std::size_t chunk = (n + nw - 1) / nw;
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

} // namespace dgrd
