#include "otray/parallel.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

using namespace otray;

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                 if (i == 57) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Parallel, ThreadCountFromEnvironment) {
  setenv("OTRAY_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  setenv("OTRAY_THREADS", "0", 1);
  EXPECT_GE(worker_count(), 1u);
  unsetenv("OTRAY_THREADS");
}

TEST(Parallel, ResultsIndependentOfWorkerCount) {
  std::vector<double> xs(12345);
  Rng rng(9);
  for (auto& x : xs) x = rng.normal();
  const double s = pairwise_sum(xs);
  for (const char* w : {"1", "2", "7"}) {
    setenv("OTRAY_THREADS", w, 1);
    std::vector<double> ys(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { ys[i] = xs[i] * 2.0; });
    EXPECT_EQ(pairwise_sum(ys), 2.0 * s);
  }
  unsetenv("OTRAY_THREADS");
}

TEST(PairwiseSum, AccurateOnCancellation) {
  std::vector<double> xs;
  for (int k = 0; k < 100000; ++k) xs.push_back(0.1);
  EXPECT_NEAR(pairwise_sum(xs), 10000.0, 1e-9);
  EXPECT_EQ(pairwise_sum({}), 0.0);
}

TEST(Rng, DeterministicStreams) {
  Rng a(5), b(5);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.uniform(), b.uniform());
  Rng c = Rng::substream(5, 1), d = Rng::substream(5, 2);
  EXPECT_NE(c.next(), d.next());
  Rng e(11);
  double m = 0, v = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = e.normal();
    m += x;
    v += x * x;
  }
  EXPECT_NEAR(m / n, 0.0, 0.01);
  EXPECT_NEAR(v / n, 1.0, 0.01);
}
