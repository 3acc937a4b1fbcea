#pragma once
// Independent reference implementations used by the unit and acceptance
// suites. Nothing here calls into the library's own numerics or search code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------- numerics

inline double beta_density(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) {
        if (x == 0.0 && a == 1.0) return std::exp(-std::lgamma(a) - std::lgamma(b) + std::lgamma(a + b));
        if (x == 1.0 && b == 1.0) return std::exp(-std::lgamma(a) - std::lgamma(b) + std::lgamma(a + b));
        return 0.0;
    }
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    return std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
}

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                       double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of the Beta(a, b) density over [lo, hi].
/// Requires a, b >= 1 so the integrand is bounded.
inline double beta_mass_quadrature(double a, double b, double lo, double hi, double tol = 1e-13) {
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);
    if (hi <= lo) return 0.0;
    auto f = [a, b](double x) { return beta_density(x, a, b); };
    // Split at the mode so the peak is never straddled by the first panels.
    std::vector<double> cuts = {lo, hi};
    if (a > 1.0 && b > 1.0) {
        const double mode = (a - 1.0) / (a + b - 2.0);
        if (mode > lo && mode < hi) cuts.insert(cuts.begin() + 1, mode);
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double x0 = cuts[i], x1 = cuts[i + 1];
        const int panels = 64;
        for (int k = 0; k < panels; ++k) {
            const double p0 = x0 + (x1 - x0) * k / panels;
            const double p1 = x0 + (x1 - x0) * (k + 1) / panels;
            const double pm = 0.5 * (p0 + p1);
            const double f0 = f(p0), f1 = f(p1), fm = f(pm);
            total += detail::adaptive(f, p0, f0, p1, f1, pm, fm, (p1 - p0) / 6.0 * (f0 + 4 * fm + f1),
                                      tol / panels, 40);
        }
    }
    return total;
}

/// Standard method-of-moments inversion for a beta with the given mean and variance.
inline std::pair<double, double> beta_from_moments(double mean, double variance) {
    const double common = mean * (1.0 - mean) / variance - 1.0;
    return {mean * common, (1.0 - mean) * common};
}

inline double beta_mean(double a, double b) { return a / (a + b); }
inline double beta_variance(double a, double b) { return a * b / ((a + b) * (a + b) * (a + b + 1.0)); }

// ------------------------------------------------------- subset selection

struct SubsetAnswer {
    std::vector<std::size_t> pros;
    std::vector<std::size_t> cons;
};

/// Enumerates every (P*, C*) pair, keeps those where the chosen pros outweigh
/// the cons left out, and returns the one minimizing
/// (C* non-empty, |P*|, |C*|, -sum P*, -sum C*, P* indices, C* indices).
inline std::optional<SubsetAnswer> brute_force_tradeoff(const std::vector<double>& pros,
                                                        const std::vector<double>& cons) {
    using Key = std::tuple<bool, std::size_t, std::size_t, double, double, std::vector<std::size_t>,
                           std::vector<std::size_t>>;
    std::optional<Key> best;
    const std::size_t np = pros.size(), nc = cons.size();
    for (std::uint64_t p = 1; p < (std::uint64_t{1} << np); ++p) {
        std::vector<std::size_t> pi;
        double ps = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            if (p >> i & 1U) {
                pi.push_back(i);
                ps += pros[i];
            }
        }
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << nc); ++c) {
            std::vector<std::size_t> ci;
            double cs = 0.0, left_out = 0.0;
            for (std::size_t i = 0; i < nc; ++i) {
                if (c >> i & 1U) {
                    ci.push_back(i);
                    cs += cons[i];
                } else {
                    left_out += cons[i];
                }
            }
            if (!(ps > left_out)) continue;
            Key k{!ci.empty(), pi.size(), ci.size(), -ps, -cs, pi, ci};
            if (!best || k < *best) best = k;
        }
    }
    if (!best) return std::nullopt;
    return SubsetAnswer{std::get<5>(*best), std::get<6>(*best)};
}

// --------------------------------------------------------- permutations

/// Weighted mean with the weights permuted: slot i takes weight w[perm[i]].
inline double permuted_mean(const std::vector<double>& values, const std::vector<double>& weights,
                            const std::vector<std::size_t>& perm) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        num += weights[perm[i]] * values[i];
        den += weights[perm[i]];
    }
    return num / den;
}

/// Minimum transpositions realizing a permutation: n minus its cycle count.
inline std::size_t transposition_count(const std::vector<std::size_t>& perm) {
    std::vector<bool> seen(perm.size(), false);
    std::size_t cycles = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (std::size_t j = i; !seen[j]; j = perm[j]) seen[j] = true;
    }
    return perm.size() - cycles;
}

/// Fewest transpositions of any weight permutation that makes the preferred
/// mean strictly lower than the other's; nullopt when none does. Both sides
/// share the same weights.
inline std::optional<std::size_t> min_inverting_swaps(const std::vector<double>& preferred,
                                                      const std::vector<double>& other,
                                                      const std::vector<double>& weights) {
    std::vector<std::size_t> perm(weights.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<std::size_t> best;
    do {
        if (permuted_mean(preferred, weights, perm) < permuted_mean(other, weights, perm)) {
            const auto k = transposition_count(perm);
            if (!best || k < *best) best = k;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// ------------------------------------------------------------- generators

/// Small deterministic generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool coin(double p = 0.5) { return uniform() < p; }
    /// Value rounded to a grid so exact ties occur with useful frequency.
    double grid(int steps) { return integer(0, steps) / static_cast<double>(steps); }

private:
    std::mt19937_64 engine_;
};

}  // namespace oracle
