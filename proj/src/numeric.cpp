#include "edgepp/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace edgepp {

namespace {

// Below this, (1 - x) loses too many significant bits of x for repeated
// multiplication to beat the log1p path.
constexpr double kSmallX = 1e-3;

double pow_by_squaring(double base, std::uint64_t k) {
    double result = 1.0;
    while (k) {
        if (k & 1u) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

}  // namespace

double pow1m(double x, std::uint64_t k) {
    if (k == 0) return 1.0;
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    if (k <= 64 && x > kSmallX) return pow_by_squaring(1.0 - x, k);
    return std::exp(static_cast<double>(k) * std::log1p(-x));
}

double one_minus_pow1m(double x, std::uint64_t k) {
    if (k == 0) return 0.0;
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (k <= 64 && x > kSmallX) return 1.0 - pow_by_squaring(1.0 - x, k);
    return -std::expm1(static_cast<double>(k) * std::log1p(-x));
}

double binomial_coefficient(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    if (n <= 62) {
        uint128 c = 1;
        for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
        return static_cast<double>(static_cast<std::uint64_t>(c));
    }
    return std::round(std::exp(std::lgamma(static_cast<double>(n) + 1.0) -
                               std::lgamma(static_cast<double>(k) + 1.0) -
                               std::lgamma(static_cast<double>(n - k) + 1.0)));
}

double binomial_pmf(std::uint64_t k, std::uint64_t n, double p) {
    if (k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    if (n <= 62)
        return binomial_coefficient(n, k) * std::pow(p, static_cast<double>(k)) * pow1m(p, n - k);
    const double log_c = std::lgamma(static_cast<double>(n) + 1.0) -
                         std::lgamma(static_cast<double>(k) + 1.0) -
                         std::lgamma(static_cast<double>(n - k) + 1.0);
    return std::exp(log_c + static_cast<double>(k) * std::log(p) +
                    static_cast<double>(n - k) * std::log1p(-p));
}

void ExactSum::add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
        if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
        const double hi = x + y;
        const double lo = y - (hi - x);
        if (lo != 0.0) partials_[i++] = lo;
        x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
}

void ExactSum::add_scaled(double x, double count) {
    const double p = x * count;
    const double e = std::fma(x, count, -p);
    add(p);
    if (e != 0.0) add(e);
}

double ExactSum::value() const {
    if (partials_.empty()) return 0.0;
    std::size_t j = partials_.size() - 1;
    double hi = partials_[j];
    double lo = 0.0;
    while (j > 0) {
        const double x = hi;
        const double y = partials_[--j];
        hi = x + y;
        const double yr = hi - x;
        lo = y - yr;
        if (lo != 0.0) break;
    }
    // Half-way case: round-half-even on hi + lo may need the sign of the next partial.
    if (j > 0 && ((lo < 0.0 && partials_[j - 1] < 0.0) || (lo > 0.0 && partials_[j - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        const double yr = x - hi;
        if (y == yr) hi = x;
    }
    return hi;
}

}  // namespace edgepp
