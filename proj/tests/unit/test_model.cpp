#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "lhvsim/model.hpp"
#include "support/stats.hpp"

using namespace lhvsim;

namespace {

double angle_distance(Angle a, Angle b) {
  const double d = std::abs(a.radians() - b.radians());
  return std::min(d, kTwoPi - d);
}

// Midpoint-rule measure of {θ in [0, π) : |cos²θ − 1/2| > Δs} / π.
double detection_fraction_by_quadrature(double threshold) {
  constexpr int n = 2'000'000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double theta = (i + 0.5) * kPi / n;
    const double c = std::cos(theta);
    if (std::abs(c * c - 0.5) > threshold) ++hits;
  }
  return static_cast<double>(hits) / n;
}

}  // namespace

TEST_CASE("pair phase maps linearly onto [0, 2pi)") {
  const PhotonPair zero = pair_from_phase(0.0);
  CHECK(zero.phi1.radians() == 0.0);
  CHECK(zero.phi2.radians() == doctest::Approx(kHalfPi));
  const PhotonPair half = pair_from_phase(0.5);
  CHECK(half.phi1.radians() == doctest::Approx(kPi));
  CHECK(half.phi2.radians() == doctest::Approx(1.5 * kPi));
}

TEST_CASE("emitted pairs are a quarter period apart and uniform") {
  RandomStream rng(5);
  double sum = 0.0;
  constexpr int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const PhotonPair p = emit_pair(rng);
    REQUIRE(angle_distance(p.phi2, p.phi1 + kHalfPi) < 1e-12);
    sum += std::cos(2.0 * p.phi1.radians());
  }
  CHECK(rng.draws() == static_cast<std::uint64_t>(n));
  CHECK(std::abs(sum / n) < 0.01);
}

TEST_CASE("decoherence") {
  SUBCASE("d = 0 leaves the pair unchanged") {
    RandomStream rng(1);
    const PhotonPair p = pair_from_phase(0.3);
    const PhotonPair q = apply_decoherence(p, NoiseConfig(0.0), rng);
    CHECK(q.phi1 == p.phi1);
    CHECK(q.phi2 == p.phi2);
    CHECK(rng.draws() == 2);
  }
  SUBCASE("d = 0.1 perturbs by at most 0.05 pi") {
    RandomStream rng(2);
    const NoiseConfig noise(0.1);
    for (int i = 0; i < 10'000; ++i) {
      const PhotonPair p = pair_from_phase(0.25);
      const PhotonPair q = apply_decoherence(p, noise, rng);
      REQUIRE(angle_distance(q.phi1, p.phi1) <= 0.05 * kPi + 1e-12);
      REQUIRE(angle_distance(q.phi2, p.phi2) <= 0.05 * kPi + 1e-12);
    }
  }
  SUBCASE("d = 1 randomizes the angle over one polarization period") {
    RandomStream rng(3);
    const NoiseConfig noise(1.0);
    std::vector<double> folded;
    // A fixed emitted angle isolates the perturbation itself.
    const PhotonPair p = pair_from_phase(0.1);
    for (int i = 0; i < 100'000; ++i) {
      const PhotonPair q = apply_decoherence(p, noise, rng);
      folded.push_back(std::fmod(q.phi1.radians(), kPi) / kPi);
    }
    CHECK(testing::ks_uniform(folded) < testing::kKsCritical1e5);
  }
  SUBCASE("arms are perturbed independently") {
    RandomStream rng(4);
    const NoiseConfig noise(0.5);
    const PhotonPair p = pair_from_phase(0.0);
    double cross = 0.0;
    for (int i = 0; i < 100'000; ++i) {
      const PhotonPair q = apply_decoherence(p, noise, rng);
      const double d1 = std::remainder(q.phi1.radians() - p.phi1.radians(), kTwoPi);
      const double d2 = std::remainder(q.phi2.radians() - p.phi2.radians(), kTwoPi);
      cross += d1 * d2;
    }
    // Var(δ) = (dπ/2)²/3 ≈ 0.206; the covariance estimate has σ ≈ 6.5e-4.
    CHECK(std::abs(cross / 100'000) < 0.004);
  }
}

TEST_CASE("configuration ranges are enforced") {
  CHECK_THROWS_AS(AnalyzerConfig(Angle{}, -0.01), std::invalid_argument);
  CHECK_THROWS_AS(AnalyzerConfig(Angle{}, 0.51), std::invalid_argument);
  CHECK_NOTHROW(AnalyzerConfig(Angle{}, 0.5));
  CHECK_THROWS_AS(NoiseConfig(1.5), std::invalid_argument);
  CHECK_THROWS_AS(NoiseConfig(-0.1), std::invalid_argument);
}

TEST_CASE("projected intensity") {
  CHECK(project_intensity(Angle(0.0), Angle(0.0)) == doctest::Approx(1.0));
  CHECK(project_intensity(Angle(kHalfPi), Angle(0.0)) == doctest::Approx(0.0));
  CHECK(project_intensity(Angle(kPi / 4.0), Angle(0.0)) == doctest::Approx(0.5));
  CHECK(project_intensity(Angle(1.0 + kPi), Angle(0.0)) == doctest::Approx(project_intensity(Angle(1.0), Angle(0.0))));
}

TEST_CASE("detection rule") {
  CHECK(detect(Angle(0.0), AnalyzerConfig(Angle(0.0), 0.1)) == Channel::Plus);
  CHECK(detect(Angle(kHalfPi), AnalyzerConfig(Angle(0.0), 0.1)) == Channel::Minus);
  for (double t : {0.0, 0.1, 0.3, 0.5}) {
    CHECK(detect(Angle(kPi / 4.0), AnalyzerConfig(Angle(0.0), t)) == Channel::Undetected);
  }
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 1000; ++i) {
    CHECK(detect(Angle(angle(gen)), AnalyzerConfig(Angle(angle(gen)), 0.5)) == Channel::Undetected);
  }
}

TEST_CASE("pair measurement") {
  const PhotonPair perpendicular{Angle(0.0), Angle(kHalfPi)};
  CHECK(measure_pair(perpendicular, AnalyzerConfig(Angle(0.0), 0.0), AnalyzerConfig(Angle(0.0), 0.0)) ==
        PairOutcome{Channel::Plus, Channel::Minus});
  CHECK(measure_pair(perpendicular, AnalyzerConfig(Angle(0.0), 0.1), AnalyzerConfig(Angle(kHalfPi), 0.1)) ==
        PairOutcome{Channel::Plus, Channel::Plus});
  const PhotonPair diagonal{Angle(kPi / 4.0), Angle(3.0 * kPi / 4.0)};
  const PairOutcome o = measure_pair(diagonal, AnalyzerConfig(Angle(0.0), 0.1), AnalyzerConfig(Angle(0.0), 0.1));
  CHECK(o == PairOutcome{Channel::Undetected, Channel::Undetected});
  CHECK_FALSE(o.coincidence());
}

TEST_CASE("detection properties over random inputs") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> threshold(0.0, 0.5);
  for (int i = 0; i < 20'000; ++i) {
    const Angle phi1(angle(gen));
    const Angle phi2(angle(gen));
    const double t = threshold(gen);
    const AnalyzerConfig a(Angle(angle(gen)), t);
    const AnalyzerConfig b(Angle(angle(gen)), t);
    const AnalyzerConfig b_other(Angle(angle(gen)), threshold(gen));
    const PhotonPair pair{phi1, phi2};

    // Locality: arm one ignores analyzer two and vice versa.
    REQUIRE(measure_pair(pair, a, b).a == measure_pair(pair, a, b_other).a);
    REQUIRE(measure_pair(pair, b_other, b).b == measure_pair(pair, a, b).b);

    // Period π and mirror symmetry about the analyzer axis.
    const Channel c = detect(phi1, a);
    REQUIRE(detect(phi1 + kPi, a) == c);
    REQUIRE(detect(Angle(2.0 * a.angle().radians() - phi1.radians()), a) == c);

    // The undetected set only grows with the threshold.
    const double larger = t + (0.5 - t) * threshold(gen) * 2.0;
    if (c == Channel::Undetected) {
      REQUIRE(detect(phi1, AnalyzerConfig(a.angle(), std::min(larger, 0.5))) == Channel::Undetected);
    }
  }
}

TEST_CASE("single-arm detection fraction at d = 0") {
  for (double t : {0.0, 0.05, 0.1, 0.2, 0.3, 0.45}) {
    const double oracle = detection_fraction_by_quadrature(t);
    CHECK(oracle == doctest::Approx(1.0 - (2.0 / kPi) * std::asin(2.0 * t)).epsilon(1e-5));
    RandomStream rng = derive_stream(77, {static_cast<std::uint64_t>(t * 1000)});
    const AnalyzerConfig analyzer(Angle(0.3), t);
    constexpr int n = 100'000;
    int detected = 0;
    for (int i = 0; i < n; ++i) {
      if (detect(emit_pair(rng).phi1, analyzer) != Channel::Undetected) ++detected;
    }
    CHECK(testing::within_sigma(static_cast<double>(detected) / n, oracle, n, 4.0));
  }
}
