#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rla {

// Error taxonomy shared by the library, the C API, and the CLI exit codes.
enum class Errc {
    run = 1,
    parse = 2,
    budget = 3,
    derandomization = 4,
    structural = 5,
    precondition = 6,
    invariant = 7,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// Exact rational on int64 with __int128 intermediates. Denominator kept positive,
// value always reduced. Large enough for every count/denominator in this library;
// overflow past 63 bits is a structural error rather than silent wraparound.
class Rational {
  public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(long long num, long long den) { assign(num, den); }
    // intentionally implicit: integers are rationals
    Rational(long long num) : num_(num), den_(1) {}
    Rational(int num) : num_(num), den_(1) {}

    long long num() const { return num_; }
    long long den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational& operator+=(const Rational& o) {
        assign_128(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
        return *this;
    }
    Rational& operator-=(const Rational& o) {
        assign_128(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
        return *this;
    }
    Rational& operator*=(const Rational& o) {
        assign_128(i128(num_) * o.num_, i128(den_) * o.den_);
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) fail(Errc::structural, "rational division by zero");
        assign_128(i128(num_) * o.den_, i128(den_) * o.num_);
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    using i128 = __int128;

    void assign(long long num, long long den) {
        if (den == 0) fail(Errc::structural, "rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        num_ = num;
        den_ = den;
    }

    void assign_128(i128 num, i128 den) {
        if (den == 0) fail(Errc::structural, "rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i128 a = num < 0 ? -num : num;
        i128 b = den;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
        const i128 lim = 0x7fffffffffffffffLL;
        if (num > lim || num < -lim || den > lim)
            fail(Errc::structural, "rational overflow");
        num_ = static_cast<long long>(num);
        den_ = static_cast<long long>(den);
    }

    long long num_;
    long long den_;
};

// splitmix64: small, fast, and identical on every platform. All randomness in the
// library flows through this so runs replay bit-for-bit.
class Splitmix64 {
  public:
    explicit Splitmix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) via rejection sampling; independent of std library
    // distribution choices.
    uint64_t next_below(uint64_t bound) {
        if (bound == 0) fail(Errc::structural, "next_below(0)");
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [0,1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    uint64_t state_;
};

inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// Derives an independent stream from (seed, tag, index). Used everywhere a run
// needs several sub-streams that must not collide.
inline uint64_t split_seed(uint64_t seed, uint64_t tag, uint64_t index = 0) {
    Splitmix64 rng(seed ^ (tag * 0x9e3779b97f4a7c15ULL) ^ (index + 0x632be59bd9b4e019ULL));
    rng.next();
    return rng.next();
}

struct Interval {
    double lo;
    double hi;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(uint64_t successes, uint64_t trials, double z);

// z for a two-sided 99% confidence level.
inline constexpr double kWilsonZ99 = 2.5758293035489004;

const char* library_version();

} // namespace rla
