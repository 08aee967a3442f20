#include "minimosa/stats.hpp"

#include "minimosa/rng.hpp"

#include "doctest.h"

#include <algorithm>

using namespace minimosa;

TEST_CASE("average ranks share tie groups") {
    CHECK(averageRanks({3, 1, 2}) == std::vector<double>{3, 1, 2});
    CHECK(averageRanks({5, 5}) == std::vector<double>{1.5, 1.5});
    CHECK(averageRanks({2, 2, 2, 2}) == std::vector<double>{2.5, 2.5, 2.5, 2.5});
    CHECK(averageRanks({10, 20, 20, 30}) == std::vector<double>{1, 2.5, 2.5, 4});
    // rank sum is always n(n+1)/2
    std::vector<double> r = averageRanks({4, 9, 9, 1, 9, 2});
    double sum = 0;
    for (double x : r) sum += x;
    CHECK(sum == 21.0);
}

TEST_CASE("rank-sum p-values match frozen references") {
    // references computed once with an independent implementation of the
    // normal approximation (average ranks, tie-corrected variance,
    // continuity correction) and pinned here to six decimals
    struct Ref {
        std::vector<double> a, b;
        double p;
    };
    const Ref refs[] = {
        {{7, 3, 9, 2}, {5, 6, 8, 4}, 0.885234},
        {{1, 2, 3, 4, 5}, {3, 3, 3, 3, 3}, 1.0},
        {{1, 3, 5, 7, 9, 11}, {2, 4, 6, 8, 10, 12}, 0.688921},
        {{0.82, 0.91, 0.77, 0.88, 0.95, 0.81, 0.79, 0.90},
         {0.70, 0.74, 0.69, 0.80, 0.72, 0.68, 0.75, 0.71},
         0.001948},
    };
    for (const Ref& r : refs) {
        CHECK(wilcoxonRankSum(r.a, r.b) == doctest::Approx(r.p).epsilon(1e-6).scale(1));
        // symmetry: two-sided p does not care which sample is first
        CHECK(wilcoxonRankSum(r.b, r.a) == doctest::Approx(wilcoxonRankSum(r.a, r.b)));
    }

    // all pooled values identical: zero variance, no evidence
    CHECK(wilcoxonRankSum({5, 5, 5}, {5, 5, 5}) == 1.0);
    CHECK_THROWS(wilcoxonRankSum({}, {1.0}));
}

TEST_CASE("rank-sum separates disjoint samples") {
    std::vector<double> lo(20), hi(20);
    for (int i = 0; i < 20; ++i) {
        lo[i] = i;
        hi[i] = 100 + i;
    }
    CHECK(wilcoxonRankSum(lo, hi) < 1e-6);
    CHECK(wilcoxonRankSum(lo, lo) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("effect size identities and references") {
    CHECK(varghaDelaneyA12({7, 3, 9, 2}, {5, 6, 8, 4}) == doctest::Approx(0.4375).epsilon(1e-12));
    CHECK(varghaDelaneyA12({1, 2, 3, 4, 5}, {3, 3, 3, 3, 3}) == 0.5);

    RandomSource rng(77);
    for (int i = 0; i < 200; ++i) {
        int n1 = 1 + static_cast<int>(rng.below(12));
        int n2 = 1 + static_cast<int>(rng.below(12));
        std::vector<double> a(n1), b(n2);
        for (double& v : a) v = static_cast<double>(rng.below(8));
        for (double& v : b) v = static_cast<double>(rng.below(8));

        // self-comparison is a coin flip; complements sum to one
        CHECK(varghaDelaneyA12(a, a) == 0.5);
        double ab = varghaDelaneyA12(a, b);
        double ba = varghaDelaneyA12(b, a);
        CHECK(ab + ba == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }

    // total separation
    CHECK(varghaDelaneyA12({10, 11}, {1, 2}) == 1.0);
    CHECK(varghaDelaneyA12({1, 2}, {10, 11}) == 0.0);
}

TEST_CASE("effect magnitude bands") {
    CHECK(effectMagnitude(0.5) == EffectMagnitude::Negligible);
    CHECK(effectMagnitude(0.559) == EffectMagnitude::Negligible);
    CHECK(effectMagnitude(0.561) == EffectMagnitude::Small);
    CHECK(effectMagnitude(0.639) == EffectMagnitude::Small);
    CHECK(effectMagnitude(0.641) == EffectMagnitude::Medium);
    CHECK(effectMagnitude(0.709) == EffectMagnitude::Medium);
    CHECK(effectMagnitude(0.711) == EffectMagnitude::Large);
    // symmetric around one half
    CHECK(effectMagnitude(0.3) == effectMagnitude(0.7));
    CHECK(std::string(effectMagnitudeName(EffectMagnitude::Large)) == "large");
}

TEST_CASE("spearman correlation") {
    CHECK(spearmanRho({1, 2, 3, 4, 5}, {2, 4, 6, 8, 10}) == doctest::Approx(1.0));
    CHECK(spearmanRho({1, 2, 3}, {6, 5, 4}) == doctest::Approx(-1.0));
    CHECK(spearmanRho({1, 1, 2, 2}, {1, 2, 1, 2}) == doctest::Approx(0.0));
    // monotone transforms leave rank correlation untouched
    CHECK(spearmanRho({1, 4, 9, 16}, {1, 2, 3, 4}) == doctest::Approx(1.0));
    // constant side carries no ordering information
    CHECK(spearmanRho({3, 3, 3}, {1, 2, 3}) == 0.0);
    CHECK_THROWS(spearmanRho({1, 2}, {1, 2, 3}));
    CHECK_THROWS(spearmanRho({}, {}));
}
