#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "quadclass/arith.hpp"

namespace quadclass::dioph {

using arith::Int;

/* D1 x^2 + D2 = lambda^2 k^y, with lambda^2 kept as an integer so that
 * lambda = sqrt(2) and lambda = 2 stay in exact arithmetic. */
struct DiophInstance
{
    unsigned lambda_sq;
    Int D1;
    Int D2;
    Int k;

    /* Throws std::invalid_argument unless lambda_sq is 1, 2 or 4, D1 and
     * D2 are positive and coprime, and k >= 2. */
    static DiophInstance make(unsigned lambda_sq, Int D1, Int D2, Int k);
};

struct Solution
{
    Int x;
    unsigned long y;

    bool operator==(Solution const &) const = default;
};

struct SolutionList
{
    DiophInstance instance;
    unsigned long y_max;
    std::vector<Solution> solutions;   // sorted by y
    bool complete_up_to_bound;
};

inline constexpr unsigned long default_y_max = 200;

/* Every (x, y), x >= 1, 1 <= y <= y_max. */
SolutionList solve_bounded(DiophInstance const & inst, unsigned long y_max = default_y_max);

/* D x^2 + 1 = 2 q^y; D > 3, q an odd prime. */
SolutionList count_lemma23(Int const & D, Int const & q, unsigned long y_max = default_y_max);

/* Which index shift the Fibonacci family uses for D1. */
enum class FibonacciShift {
    Double,   // (F_{j-2e}, L_{j+e}, F_j)
    Single,   // (F_{j-e}, L_{j+e}, F_j)
};

struct FWitness
{
    unsigned long index;
    int epsilon;
};

/* Scans j >= 2 (both signs of epsilon) until F_j exceeds k. Throws
 * CapExceeded if the scan would need an index above cap. */
std::optional<FWitness> in_family_F(Int const & D1, Int const & D2, Int const & k,
                                    FibonacciShift shift = FibonacciShift::Double,
                                    unsigned long cap = arith::default_sequence_cap);

/* D1 = 1 and D2 + 1 = 4 k^r for some r >= 1; returns r. */
std::optional<unsigned long> in_family_G(Int const & D1, Int const & D2, Int const & k);

struct HWitness
{
    unsigned long r;
    Int s;
};

/* r <= r_max, s <= s_max with D1 s^2 + D2 = lambda^2 k^r and
 * 3 D1 s^2 - D2 = +-lambda^2. */
std::optional<HWitness> in_family_H(Int const & D1, Int const & D2, Int const & k, unsigned lambda_sq,
                                    unsigned long r_max = 64, Int const & s_max = Int(1'000'000));

/* The seven exceptional (lambda^2, D1, D2, k) with two solutions. */
bool is_sporadic(unsigned lambda_sq, Int const & D1, Int const & D2, Int const & k);

struct IntegerPoint
{
    Int x;
    Int y;

    bool operator==(IntegerPoint const &) const = default;
};

/* 1 <= x <= x_max with (1 - 2 x^p) / d0 a perfect square y^2. */
std::vector<IntegerPoint> siegel_scan(Int const & d0, unsigned long p, Int const & x_max);

} // namespace quadclass::dioph
