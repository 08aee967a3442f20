#include "minimosa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace minimosa {

std::vector<double> averageRanks(const std::vector<double>& values) {
    size_t n = values.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) j++;
        double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double wilcoxonRankSum(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("rank-sum test needs non-empty samples");
    double n1 = static_cast<double>(a.size());
    double n2 = static_cast<double>(b.size());
    double n = n1 + n2;

    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks = averageRanks(pooled);

    double r1 = 0.0;
    for (size_t i = 0; i < a.size(); ++i) r1 += ranks[i];
    double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    double mean = n1 * n2 / 2.0;

    // tie correction over pooled tie groups
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tieSum = 0.0;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) j++;
        double t = static_cast<double>(j - i + 1);
        tieSum += t * t * t - t;
        i = j + 1;
    }
    double variance = n1 * n2 / 12.0 * ((n + 1.0) - tieSum / (n * (n - 1.0)));
    if (variance <= 0.0) return 1.0;

    double shifted = std::fabs(u1 - mean) - 0.5; // continuity correction
    if (shifted < 0.0) shifted = 0.0;
    double z = shifted / std::sqrt(variance);
    double p = std::erfc(z / std::sqrt(2.0));
    return std::min(1.0, p);
}

double varghaDelaneyA12(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("effect size needs non-empty samples");
    double wins = 0.0;
    for (double x : a)
        for (double y : b) {
            if (x > y)
                wins += 1.0;
            else if (x == y)
                wins += 0.5;
        }
    return wins / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

const char* effectMagnitudeName(EffectMagnitude m) {
    switch (m) {
        case EffectMagnitude::Negligible: return "negligible";
        case EffectMagnitude::Small: return "small";
        case EffectMagnitude::Medium: return "medium";
        case EffectMagnitude::Large: return "large";
    }
    return "?";
}

EffectMagnitude effectMagnitude(double a12) {
    double d = std::fabs(a12 - 0.5);
    if (d < 0.06) return EffectMagnitude::Negligible;
    if (d < 0.14) return EffectMagnitude::Small;
    if (d < 0.21) return EffectMagnitude::Medium;
    return EffectMagnitude::Large;
}

double spearmanRho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || x.size() != y.size())
        throw std::invalid_argument("correlation needs equal-length non-empty samples");
    std::vector<double> rx = averageRanks(x);
    std::vector<double> ry = averageRanks(y);
    double n = static_cast<double>(x.size());
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (size_t i = 0; i < rx.size(); ++i) {
        double dx = rx[i] - mx;
        double dy = ry[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if (vx == 0.0 || vy == 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

} // namespace minimosa
