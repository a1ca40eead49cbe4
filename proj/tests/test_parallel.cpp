#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

#include "hwid/parallel.hpp"

using namespace hwid;

TEST(Parallel, ResultsIndependentOfJobs) {
  std::vector<std::vector<std::uint64_t>> runs;
  for (unsigned jobs : {1u, 2u, 3u, 8u}) {
    std::vector<std::uint64_t> out(1000);
    parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = i * i + 7; });
    runs.push_back(out);
  }
  for (const auto& r : runs) EXPECT_EQ(r, runs.front());
}

TEST(Parallel, EmptyAndDefaultJobs) {
  int calls = 0;
  parallel_for(0, 4, [&](std::size_t) { ++calls; });
  EXPECT_EQ(calls, 0);
  EXPECT_GE(resolve_jobs(0), 1u);
  EXPECT_EQ(resolve_jobs(5), 5u);
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  for (unsigned jobs : {1u, 4u}) {
    std::vector<int> done(200, 0);
    try {
      parallel_for(done.size(), jobs, [&](std::size_t i) {
        if (i == 150 || i == 60) throw std::runtime_error("item " + std::to_string(i));
        done[i] = 1;
      });
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "item 60");
    }
  }
}
