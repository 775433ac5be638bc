//! \file test_worker_pool.cpp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "worker_pool.hpp"

using namespace amrbench;

TEST_CASE("parallel_for covers every index exactly once") {
  for (int workers : {1, 2, 4, 7}) {
    WorkerPool pool(workers);
    std::vector<int> hits(1000, 0);
    pool.parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("repeated dispatches reuse the pool") {
  WorkerPool pool(4);
  std::vector<double> out(257, 0.0);
  for (int round = 0; round < 50; ++round) {
    pool.parallel_for(out.size(), [&](std::size_t i) { out[i] += static_cast<double>(i); });
  }
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 50.0 * i);
}

TEST_CASE("zero count is a no-op") {
  WorkerPool pool(3);
  bool touched = false;
  pool.parallel_for(0, [&](std::size_t) { touched = true; });
  CHECK(!touched);
}

TEST_CASE("exceptions propagate to the caller") {
  WorkerPool pool(4);
  std::atomic<int> ran{0};
  CHECK_THROWS_AS(pool.parallel_for(100,
                                    [&](std::size_t i) {
                                      ran.fetch_add(1);
                                      if (i == 31) throw std::runtime_error("boom");
                                    }),
                  std::runtime_error);
  CHECK(ran.load() > 0);
  // The pool stays usable afterwards.
  std::vector<int> hits(10, 0);
  pool.parallel_for(hits.size(), [&](std::size_t i) { hits[i] = 1; });
  for (int h : hits) CHECK(h == 1);
}
