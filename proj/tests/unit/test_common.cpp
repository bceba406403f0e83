// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <string>
#include <vector>

#include "dgrd/common.hpp"

using namespace dgrd;

TEST_SUITE("common") {

TEST_CASE("format17 is round-trip safe") {
  const double values[] = {0.0,          1.0,   -1.0,        0.1,
                           1.0 / 3.0,    1e-300, 1e300,      123456.789,
                           -2.5e-7,      3.141592653589793};
  for (double v : values) {
    const std::string s = format17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format17(0.1) == "0.10000000000000001");
  CHECK(format17(1.0) == "1");
}

TEST_CASE("fnv1a matches the published 64-bit test vectors") {
  CHECK(fnv1a(std::string("")) == 0xcbf29ce484222325ULL);
  CHECK(fnv1a(std::string("a")) == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a(std::string("foobar")) == 0x85944171f73967e8ULL);
  CHECK(fnv1a(1.5) == 0xaa95e93229a27c80ULL);
  // chaining equals hashing the concatenation
  CHECK(fnv1a(std::string("bar"), fnv1a(std::string("foo"))) ==
        fnv1a(std::string("foobar")));
}

TEST_CASE("parallel_for partitions the index range exactly once") {
  for (int threads : {1, 2, 4, 7}) {
    const std::size_t n = 103;
    std::vector<std::atomic<int>> hits(n);
    for (auto& h : hits) {
      h = 0;
    }
    parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        hits[i].fetch_add(1);
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(hits[i].load() == 1);
    }
  }
}

TEST_CASE("parallel_for handles empty and single-element ranges") {
  int calls = 0;
  parallel_for(0, 4, [&](std::size_t, std::size_t) { ++calls; });
  CHECK(calls == 0);
  parallel_for(1, 4, [&](std::size_t b, std::size_t e) {
    CHECK(b == 0);
    CHECK(e == 1);
    ++calls;
  });
  CHECK(calls == 1);
}

TEST_CASE("error types carry their messages") {
  CHECK_THROWS_WITH_AS(throw invalid_input("bad nx"), "bad nx", invalid_input);
  CHECK_THROWS_WITH_AS(throw internal_error("not SPD"), "not SPD",
                       internal_error);
}

} // TEST_SUITE
