#pragma once

// Nonparametric comparison statistics for run samples: two-sided rank-sum
// test, the Â₁₂ stochastic-superiority effect size with the conventional
// magnitude bands, and Spearman rank correlation for sanity properties.

#include <string>
#include <vector>

namespace minimosa {

// Average ranks (1-based, ties share the mean rank) of `values`.
std::vector<double> averageRanks(const std::vector<double>& values);

// Two-sided Mann–Whitney U p-value via the normal approximation: average
// ranks, tie-corrected variance, continuity correction. Zero variance (all
// pooled values identical) gives p = 1. Throws on an empty sample.
double wilcoxonRankSum(const std::vector<double>& a, const std::vector<double>& b);

// Â₁₂ = (#{a > b} + ½·#{a = b}) / (|a|·|b|): probability that a draw from
// `a` beats a draw from `b`, ties split. Throws on an empty sample.
double varghaDelaneyA12(const std::vector<double>& a, const std::vector<double>& b);

enum class EffectMagnitude { Negligible, Small, Medium, Large };

const char* effectMagnitudeName(EffectMagnitude m);

// Bands on |Â₁₂ − ½|: < 0.06 negligible, < 0.14 small, < 0.21 medium.
EffectMagnitude effectMagnitude(double a12);

// Spearman rank correlation (Pearson over average ranks); 0 when either
// side is constant. Throws on mismatched or empty input.
double spearmanRho(const std::vector<double>& x, const std::vector<double>& y);

} // namespace minimosa
