#include "cubelam/periodic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cubelam;

namespace {

PeriodicDeformation<Rational> modes(std::vector<std::pair<Frequency, Rational>> mode_list) {
  PeriodicDeformation<Rational> d;
  for (auto& [n, c] : mode_list) d.modes.push_back({Vec2q(1, 0), n, c});
  return d;
}

// independent oracle: classify the centre of every cell of a fine grid
std::vector<double> grid_weights(const PeriodicDeformation<Rational>& d, int g) {
  std::vector<double> w(std::size_t{1} << d.size(), 0.0);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double x = (i + 0.5) / g;
      const double y = (j + 0.5) / g;
      SignPattern eps = 0;
      for (int k = 0; k < d.size(); ++k) {
        const auto& m = d.modes[k];
        const double t = m.frequency[0] * x + m.frequency[1] * y + to_double(m.phase);
        if (sawtooth_slope(t).value_or(1) < 0) eps |= SignPattern{1} << k;
      }
      w[eps] += 1.0 / (static_cast<double>(g) * g);
    }
  }
  return w;
}

}  // namespace

TEST(Sawtooth, ValuesAndSlopes) {
  EXPECT_EQ(sawtooth(Rational(1, 4)), Rational(1, 4));
  EXPECT_EQ(sawtooth(Rational(3, 4)), Rational(1, 4));
  EXPECT_EQ(sawtooth(Rational(-1, 4)), Rational(1, 4));
  EXPECT_EQ(sawtooth(Rational(5, 2)), Rational(1, 2));
  EXPECT_EQ(sawtooth_slope(Rational(1, 8)), 1);
  EXPECT_EQ(sawtooth_slope(Rational(5, 8)), -1);
  EXPECT_FALSE(sawtooth_slope(Rational(1, 2)).has_value());
  EXPECT_FALSE(sawtooth_slope(Rational(3)).has_value());
  EXPECT_DOUBLE_EQ(sawtooth(0.75), 0.25);
}

TEST(SignPattern, StringRoundTrip) {
  EXPECT_EQ(pattern_to_string(0b110, 3), "+--");
  EXPECT_EQ(pattern_from_string("+--"), 0b110U);
  EXPECT_EQ(pattern_parity(0b110, 3), 1);
  EXPECT_EQ(pattern_parity(0b111, 3), -1);
  EXPECT_THROW(pattern_from_string("+x-"), InputError);
}

TEST(ExactWeights, ThreeModeLandmark) {
  const auto w = exact_weights(modes({{{1, 0}, 0}, {{0, 1}, 0}, {{1, 1}, Rational(1, 4)}}));
  for (SignPattern eps = 0; eps < 8; ++eps) {
    EXPECT_EQ(w[eps], pattern_parity(eps, 3) > 0 ? Rational(1, 16) : Rational(3, 16))
        << pattern_to_string(eps, 3);
  }
}

TEST(ExactWeights, SingleModeIsHalfHalf) {
  const auto w = exact_weights(modes({{{3, -2}, Rational(1, 7)}}));
  EXPECT_EQ(w[0], Rational(1, 2));
  EXPECT_EQ(w[1], Rational(1, 2));
}

TEST(ExactWeights, TwoIndependentModesAreUniform) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> f(-5, 5);
  std::uniform_int_distribution<int> p(0, 23);
  int done = 0;
  while (done < 30) {
    const Frequency n1{f(rng), f(rng)}, n2{f(rng), f(rng)};
    if (n1[0] * n2[1] - n1[1] * n2[0] == 0) continue;
    const auto w = exact_weights(modes({{n1, Rational(p(rng), 24)}, {n2, Rational(p(rng), 24)}}));
    for (SignPattern eps = 0; eps < 4; ++eps) EXPECT_EQ(w[eps], Rational(1, 4));
    ++done;
  }
}

TEST(ExactWeights, AgreesWithGridOracle) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> f(-3, 3);
  std::uniform_int_distribution<int> p(0, 11);
  for (int it = 0; it < 10; ++it) {
    std::vector<std::pair<Frequency, Rational>> mode_list;
    for (int k = 0; k < 3; ++k) {
      Frequency n{0, 0};
      while (n[0] == 0 && n[1] == 0) n = {f(rng), f(rng)};
      mode_list.push_back({n, Rational(p(rng), 12)});
    }
    const auto d = modes(mode_list);
    const auto exact = exact_weights(d);
    const auto grid = grid_weights(d, 600);
    EXPECT_EQ(exact.total(), 1);
    for (SignPattern eps = 0; eps < 8; ++eps) {
      // cells cut by a boundary line carry O(1/g) total misclassified area
      EXPECT_NEAR(to_double(exact[eps]), grid[eps], 0.02);
    }
  }
}

TEST(ExactWeights, EdgeSumsAreOneQuarter) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> f(-4, 4);
  std::uniform_int_distribution<int> p(0, 15);
  int done = 0;
  while (done < 20) {
    std::vector<Frequency> n(3);
    for (auto& v : n) v = {f(rng), f(rng)};
    bool independent = true;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) independent &= n[i][0] * n[j][1] - n[i][1] * n[j][0] != 0;
    }
    if (!independent) continue;
    const auto w = exact_weights(modes({{n[0], Rational(p(rng), 16)},
                                        {n[1], Rational(p(rng), 16)},
                                        {n[2], Rational(p(rng), 16)}}));
    for (int axis = 0; axis < 3; ++axis) {
      for (SignPattern eps = 0; eps < 8; ++eps) {
        if (eps & (1U << axis)) continue;
        EXPECT_EQ(w[eps] + w[eps | (1U << axis)], Rational(1, 4));
      }
    }
    ++done;
  }
}

TEST(ExactWeights, RejectsBadInput) {
  EXPECT_THROW(exact_weights(PeriodicDeformation<Rational>{}), InputError);
  EXPECT_THROW(exact_weights(modes({{{0, 0}, 0}})), InputError);
}

TEST(Correlation, ParityAndPeak) {
  EXPECT_EQ(correlation_integral(2, 3, Rational(1, 3)), 0);
  EXPECT_EQ(correlation_integral(1, 1, Rational(3, 2)), Rational(1, 2));
  EXPECT_EQ(correlation_integral(3, 5, Rational(1, 2)), Rational(-1, 30));
  EXPECT_EQ(correlation_integral(1, 1, Rational(7, 2)), correlation_integral(1, 1, Rational(3, 2)));
}

TEST(Correlation, MatchesExactWeights) {
  for (int k = 1; k <= 5; ++k) {
    for (int l = 1; l <= 5; ++l) {
      for (int j = 0; j < 8; ++j) {
        const Rational c(j, 8);
        const auto w = exact_weights(modes({{{1, 0}, 0}, {{0, 1}, 0}, {{k, l}, c}}));
        Rational signed_sum(0);
        for (SignPattern eps = 0; eps < 8; ++eps) signed_sum += pattern_parity(eps, 3) * w[eps];
        EXPECT_EQ(signed_sum / 4, correlation_integral(k, l, 2 * c) / 4) << k << " " << l << " " << c;
      }
    }
  }
}

TEST(MonteCarlo, ReproducibleAcrossWorkerCounts) {
  const auto d = modes({{{1, 0}, 0}, {{0, 1}, 0}, {{1, 1}, Rational(1, 4)}});
  const auto a = mc_weights(d, 300000, 42, 1);
  const auto b = mc_weights(d, 300000, 42, 7);
  EXPECT_EQ(a.weights, b.weights);
  const auto c = mc_weights(d, 300000, 43, 4);
  EXPECT_NE(a.weights, c.weights);
}

TEST(MonteCarlo, AgreesWithExactWeights) {
  const auto d = modes({{{1, 2}, Rational(1, 3)}, {{-1, 1}, 0}, {{3, 1}, Rational(1, 5)}});
  const auto exact = exact_weights(d);
  const std::uint64_t n = 1000000;
  const auto mc = mc_weights(d, n, 7);
  for (SignPattern eps = 0; eps < 8; ++eps) {
    const double p = to_double(exact[eps]);
    const double sd = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(mc[eps], p, 4 * sd + 1e-12);
  }
}
