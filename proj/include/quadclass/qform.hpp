#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "quadclass/arith.hpp"

namespace quadclass::qform {

using arith::Int;

/* A negative discriminant D = 0 or 1 (mod 4). */
class Discriminant
{
  public:
    /* Validates the congruence; fundamentality is decided by factoring
     * |D| with the given budget (EffortExceeded propagates). */
    explicit Discriminant(Int value, arith::FactorBudget const & budget = {});

    /* Discriminant of the maximal order of Q(sqrt(n)) for any n < 0:
     * d if d = 1 (mod 4) else 4d, with d the squarefree part of n. */
    static Discriminant of_field(Int const & n, arith::FactorBudget const & budget = {});

    /* Same as of_field but for d already known squarefree; no factoring. */
    static Discriminant of_squarefree(Int const & d);

    Int const & value() const { return value_; }
    bool is_fundamental() const { return fundamental_; }

    bool operator==(Discriminant const & o) const { return value_ == o.value_; }

  private:
    Discriminant(Int value, bool fundamental);

    Int value_;
    bool fundamental_;
};

std::ostream & operator<<(std::ostream & os, Discriminant const & D);

/* a x^2 + b x y + c y^2 */
struct QuadForm
{
    Int a;
    Int b;
    Int c;

    Int discriminant() const { return b * b - 4 * a * c; }
    bool is_primitive() const;

    bool operator==(QuadForm const &) const = default;
    /* Lexicographic on (a, b, c). */
    std::strong_ordering operator<=>(QuadForm const & o) const;
};

std::ostream & operator<<(std::ostream & os, QuadForm const & f);

struct QuadFormHash
{
    std::size_t operator()(QuadForm const & f) const noexcept;
};

/* Size limits for the expensive operations. */
struct Limits
{
    /* Largest |D| accepted by class_number. */
    Int enum_bound{1'000'000'000'000'000UL};
    /* Largest h for which the group structure is computed. */
    std::uint64_t struct_bound = 10'000'000;
    /* Worker threads for the counting loop; 0 means hardware concurrency. */
    unsigned threads = 0;
    arith::FactorBudget budget{};
};

bool is_reduced(QuadForm const & f);

/* Unique reduced representative: |b| <= a <= c, b >= 0 if |b| = a or a = c. */
QuadForm reduce(QuadForm f);

QuadForm identity_form(Discriminant const & D);

/* Product class of f and g (same discriminant), reduced. */
QuadForm compose(QuadForm const & f, QuadForm const & g);
QuadForm square(QuadForm const & f);
QuadForm inverse(QuadForm const & f);
QuadForm form_pow(QuadForm const & f, Int const & e);

/* Number of reduced primitive forms of discriminant D, counted over
 * a <= sqrt(|D|/3) with b^2 = D (mod 4a). BoundExceeded above
 * limits.enum_bound. The result does not depend on limits.threads. */
std::uint64_t class_number(Discriminant const & D, Limits const & limits = {});

/* All reduced primitive forms, sorted. BoundExceeded if h exceeds
 * limits.struct_bound. */
std::vector<QuadForm> reduced_forms(Discriminant const & D, Limits const & limits = {});

/* Least e >= 1 with f^e = 1, found by descending through the divisors
 * of the class number. */
std::uint64_t element_order(QuadForm const & f, std::uint64_t class_number);
std::uint64_t element_order(QuadForm const & f, Limits const & limits = {});

/* Reduced form of a prime ideal of norm ell, or nullopt when ell is inert
 * (or divides the conductor, where no primitive form of norm ell exists). */
std::optional<QuadForm> prime_form(Discriminant const & D, Int const & ell);

struct NormSearch
{
    /* Distinct reduced classes containing a primitive form (n, B, C). */
    std::vector<QuadForm> forms;
    /* Candidates (n, B, C) rejected because gcd(n, B, C) > 1. */
    std::vector<QuadForm> nonprimitive;
};

NormSearch forms_of_norm(Discriminant const & D, Int const & n,
                         arith::FactorBudget const & budget = {});

struct ClassGroupStructure
{
    Discriminant discriminant;
    std::uint64_t class_number;
    /* d_1 | d_2 | ... | d_t, each >= 2, product = class_number. */
    std::vector<std::uint64_t> elementary_divisors;
    /* generators[i] has order elementary_divisors[i]. */
    std::vector<QuadForm> generators;
};

ClassGroupStructure class_group_structure(Discriminant const & D, Limits const & limits = {});

} // namespace quadclass::qform
