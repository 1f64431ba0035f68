#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>

namespace hamfactor {

// Exact scalar for everything in this library. mpq_class values stay
// reduced (gcd 1, positive denominator) as long as they are produced by
// the factories below or by arithmetic on already-canonical values.
using Rat = mpq_class;

/// Canonical rational from machine integers.
Rat rat(long num, long den = 1);

/// Parse a strict decimal rational: "p" or "p/q", optional leading sign
/// on the numerator only. Throws ParseError otherwise.
Rat rat_parse(const std::string& text);

/// "p" or "p/q", reduced, denominator omitted when 1.
std::string rat_str(const Rat& q);

/// Deterministic rational sampler used by property tests and the seeded
/// independence probes.
class RatRng {
public:
    explicit RatRng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform numerator in [-num_range, num_range], denominator in [1, den_range].
    Rat rational(int num_range = 9, int den_range = 9);
    Rat nonzero_rational(int num_range = 9, int den_range = 9);
    long integer(long lo, long hi);

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

} // namespace hamfactor
