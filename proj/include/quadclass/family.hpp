#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadclass/arith.hpp"
#include "quadclass/qform.hpp"

namespace quadclass::family {

using arith::Int;

/* m = q^r with p, q odd primes. */
struct FamilyParams
{
    unsigned long p;
    unsigned long q;
    unsigned long r;

    /* Throws std::invalid_argument unless p, q are primes >= 3 and r >= 1. */
    static FamilyParams make(unsigned long p, unsigned long q, unsigned long r);

    Int m() const;
    /* 1 - 2 m^p */
    Int radicand() const;

    auto operator<=>(FamilyParams const &) const = default;
};

/* One imaginary quadratic field Q(sqrt(radicand)) checked for
 * divisibility of its class number by `divisor`. */
struct FieldInfo
{
    Int radicand;
    Int d;                                  // signed squarefree part
    Int s;                                  // radicand = d s^2
    std::optional<qform::Discriminant> disc;
    std::uint64_t divisor = 0;
    std::optional<std::uint64_t> class_number;
    std::optional<bool> divisible;
    std::optional<std::string> skipped_reason;

    bool evaluated() const { return class_number.has_value(); }
};

struct FieldRecord
{
    FamilyParams params;
    FieldInfo field;
};

struct PairRecord
{
    FamilyParams params;
    Int d_pair;          // 4 (1 - 2 m^p)^p
    Int U;               // 2 m^p - 1
    FieldInfo left;      // Q(sqrt(d_pair))
    FieldInfo right;     // Q(sqrt(d_pair + 1))
    std::optional<bool> both_divisible;
};

struct LouboutinRecord
{
    Int U;
    unsigned long k;
    FieldInfo field;     // Q(sqrt(1 - 4 U^k))
};

/* Radicand, squarefree part and discriminant of Q(sqrt(1 - 2 m^p)).
 * Throws QiExcluded when d = -1; factoring failures land in
 * skipped_reason. */
FieldRecord base_field(FamilyParams const & params, qform::Limits const & limits = {});

/* base_field plus h and the verdict p | h. Bound failures are recorded
 * as skipped_reason. */
FieldRecord verify_thm1(FamilyParams const & params, qform::Limits const & limits = {});

PairRecord pair(FamilyParams const & params, qform::Limits const & limits = {});
PairRecord verify_thm2_pair(FamilyParams const & params, qform::Limits const & limits = {});

/* U >= 2, k odd >= 3. */
LouboutinRecord louboutin_field(Int const & U, unsigned long k, qform::Limits const & limits = {});

/* Element x + y sqrt(d) of Q(sqrt(d)), divided by `denominator`
 * (1, or 2 for half-integral elements when d = 1 mod 4). */
struct QuadInteger
{
    Int x;
    Int y;
    unsigned denominator = 1;

    bool operator==(QuadInteger const &) const = default;
};

struct PthPowerVerdict
{
    enum class Kind { NotPthPower, IsPthPower, Skipped };

    Kind kind = Kind::Skipped;
    std::optional<QuadInteger> witness;
    /* Number of beta of norm 2m examined. */
    std::size_t candidates = 0;
    /* b >= 1 with 1 + |d| b^2 = 2 q^r; the pth-power argument needs this
     * to be empty since b' = s already solves 1 + |d| b'^2 = 2 q^(rp). */
    std::vector<Int> norm_equation_solutions;
    std::optional<std::string> reason;
};

/* Every beta in O_K with N(beta) = norm, and whether beta^p equals
 * +-target. Brute force over the finitely many beta (d < 0). */
std::optional<QuadInteger> find_pth_root(Int const & d, QuadInteger const & target, unsigned long p,
                                         Int const & norm, std::size_t * examined = nullptr);

/* Decides whether +-2^((p-1)/2) (1 + sqrt(1 - 2 m^p)) is a pth power in
 * the ring of integers of Q(sqrt(1 - 2 m^p)). */
PthPowerVerdict check_pth_power(FamilyParams const & params, arith::FactorBudget const & budget = {});

struct WitnessResult
{
    std::optional<qform::QuadForm> witness;
    /* All reduced classes of norm 2m with their orders, canonical order. */
    std::vector<qform::QuadForm> candidates;
    std::vector<std::uint64_t> candidate_orders;
    std::uint64_t class_number = 0;
};

/* First class of norm 2m (lexicographic (a, b, c)) whose order is
 * exactly p. BoundExceeded if h is above limits.struct_bound. */
WitnessResult witness_order_p(FamilyParams const & params, qform::Limits const & limits = {});

struct SetScan
{
    std::vector<FamilyParams> admitted;
    std::vector<FieldRecord> rejected;       // evaluated, p does not divide h
    std::vector<FieldRecord> skipped;
};

/* All (p, q, r), 3 <= q <= q_max prime, r <= r_max, whose field has
 * p | h. */
SetScan generate_S(unsigned long p, unsigned long q_max, unsigned long r_max,
                   qform::Limits const & limits = {});

} // namespace quadclass::family
