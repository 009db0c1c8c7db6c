#pragma once

#include <cmath>
#include <cstdint>

#include "rla/core.hpp"

// Parameter formulas shared by the transforms and the sampler. All cardinality
// formulas round to the nearest integer; h, gamma, p and alpha stay real-valued.
namespace rla::params {

inline double ln_alphabet(const Alphabet& alphabet) {
    return std::log(static_cast<double>(alphabet.size));
}

// Repetitions needed to push error sigma below sigma_target by majority vote:
// t = 108 * log2(1/sigma_target) / sigma.
inline uint64_t repetition_count(const Rational& sigma, const Rational& sigma_target) {
    if (!(sigma > Rational(0)) || !(sigma_target > Rational(0)))
        fail(Errc::precondition, "repetition_count requires positive error rates");
    double bits = -std::log2(sigma_target.to_double());
    return static_cast<uint64_t>(std::llround(108.0 * bits / sigma.to_double()));
}

// Support size of the derandomized tree distribution: 3 n ln|Sigma| / sigma.
inline uint64_t derand_support(uint32_t n, const Alphabet& alphabet, const Rational& sigma) {
    if (!(sigma > Rational(0))) fail(Errc::precondition, "derand_support requires sigma > 0");
    return static_cast<uint64_t>(
        std::llround(3.0 * n * ln_alphabet(alphabet) / sigma.to_double()));
}

// Error rate after the full preparation pipeline: 1/(8q').
inline Rational prepared_sigma(uint32_t q_prime) { return Rational(1, 8LL * q_prime); }

// Support size after preparation: 48 q' n ln|Sigma| (equals derand_support at
// sigma'' = 1/(16 q')).
inline uint64_t prepared_support(uint32_t n, const Alphabet& alphabet, uint32_t q_prime) {
    return static_cast<uint64_t>(
        std::llround(48.0 * q_prime * n * ln_alphabet(alphabet)));
}

// gamma = 48 |Sigma|^q ln|Sigma|.
inline double gamma_value(uint32_t q, const Alphabet& alphabet) {
    return 48.0 * std::pow(static_cast<double>(alphabet.size), static_cast<double>(q)) *
           ln_alphabet(alphabet);
}

// Sampling probability p = gamma * n^(-1/(2 q^2)), clamped to 1 at small scale.
inline double sampling_p(uint32_t n, uint32_t q, double gamma) {
    double raw = gamma * std::pow(static_cast<double>(n), -1.0 / (2.0 * q * q));
    return raw > 1.0 ? 1.0 : raw;
}

inline bool sampling_p_clamped(uint32_t n, uint32_t q, double gamma) {
    return gamma * std::pow(static_cast<double>(n), -1.0 / (2.0 * q * q)) > 1.0;
}

// Capping parameter for the petal-size-1 daisy: alpha = 12 ln|Sigma| / (rho * sigma).
inline double capping_alpha(const Alphabet& alphabet, const Rational& rho,
                            const Rational& sigma) {
    if (!(rho > Rational(0)) || !(sigma > Rational(0)))
        fail(Errc::precondition, "capping_alpha requires positive rho and sigma");
    return 12.0 * ln_alphabet(alphabet) / (rho.to_double() * sigma.to_double());
}

// Threshold tau_j = (|mu| / 4q) * p^j. The p = 1 case is kept exact.
inline Rational threshold_base(uint64_t support, uint32_t q) {
    return Rational(static_cast<long long>(support), 4LL * q);
}

inline double threshold_value(uint64_t support, uint32_t q, double p, uint32_t j) {
    return threshold_base(support, q).to_double() * std::pow(p, static_cast<double>(j));
}

// Post-amplification query complexity: the least fixed point of
// q' = t * q with t = repetition_count(sigma, 1/(16 q')). Identity when sigma
// is already <= 1/(16q).
inline uint32_t amplified_q(uint32_t q, const Rational& sigma) {
    if (sigma <= Rational(1, 16LL * q)) return q;
    uint64_t t = 1;
    for (int iter = 0; iter < 64; ++iter) {
        if (t > (1ull << 40) / (16ull * q))
            fail(Errc::budget, "amplified query complexity exceeds limits");
        uint64_t next = repetition_count(sigma, Rational(1, static_cast<long long>(16 * t * q)));
        if (next == t) break;
        t = next;
    }
    if (t * q > 0xffffffffULL) fail(Errc::budget, "amplified query complexity exceeds limits");
    return static_cast<uint32_t>(t * q);
}

} // namespace rla::params
