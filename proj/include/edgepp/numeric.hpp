#pragma once

#include <cstdint>
#include <vector>

namespace edgepp {

__extension__ typedef unsigned __int128 uint128;
__extension__ typedef __int128 int128;

/// (1 - x)^k for x in [0, 1]. Uses exact repeated squaring for small k when x
/// is not tiny, and exp(k * log1p(-x)) otherwise.
double pow1m(double x, std::uint64_t k);

/// 1 - (1 - x)^k, computed with expm1 on the logarithmic path so that the
/// result keeps full relative precision when x * k is small.
double one_minus_pow1m(double x, std::uint64_t k);

/// Binomial coefficient as a double; exact while the value fits in 53 bits.
double binomial_coefficient(std::uint64_t n, std::uint64_t k);

/// P(X = k) for X ~ Binomial(n, p).
double binomial_pmf(std::uint64_t k, std::uint64_t n, double p);

/// Correctly rounded floating-point summation (Shewchuk partials, as in
/// Python's math.fsum). The final value depends only on the exact real sum of
/// the inputs, not on their order or grouping.
class ExactSum {
public:
    void add(double x);
    /// Adds count * x exactly via an error-free product.
    void add_scaled(double x, double count);
    double value() const;

private:
    std::vector<double> partials_;
};

}  // namespace edgepp
