#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace quadclass::arith {

using Int = mpz_class;

/* Effort limits for factoring. Trial division runs over all primes up to
 * trial_bound, then Brent's variant of Pollard rho gets at most
 * rho_iterations polynomial steps per composite cofactor. */
struct FactorBudget
{
    std::uint64_t trial_bound = 1'000'000;
    std::uint64_t rho_iterations = 100'000'000;
};

struct PrimePower
{
    Int prime;
    unsigned exponent;

    bool operator==(PrimePower const &) const = default;
};

/* value = prod prime^exponent, primes strictly increasing. */
struct Factorization
{
    Int value;
    std::vector<PrimePower> factors;

    Int product() const;
};

/* Miller-Rabin. Deterministic below 3317044064679887385961981 (first 13
 * prime bases), 64 rounds with bases drawn from a generator seeded by n
 * above that, so repeated calls agree. */
bool is_prime(Int const & n);

/* Throws EffortExceeded when the budget runs out. */
Factorization factor(Int const & n, FactorBudget const & budget = {});

/* n = d * s^2 with d squarefree, sign(d) = sign(n), s > 0. */
struct SquarefreePart
{
    Int d;
    Int s;
};

SquarefreePart squarefree_part_signed(Int const & n,
                                      FactorBudget const & budget = {});

int kronecker(Int const & a, Int const & n);

/* Sorted list of all r in [0, m) with r^2 = a (mod m). */
std::vector<Int> sqrt_mod(Int const & a, Int const & m,
                          FactorBudget const & budget = {});

/* Same, for a prime power modulus p^e with p known to be prime. Handles
 * a divisible by p and p = 2. */
std::vector<Int> sqrt_mod_prime_power(Int const & a, Int const & p,
                                      unsigned e);

/* Combines residue lists modulo pairwise coprime moduli. */
std::vector<Int> crt_combine(std::vector<Int> const & xs, Int const & m,
                             std::vector<Int> const & ys, Int const & n);

inline constexpr unsigned long default_sequence_cap = 300;

/* F_0 = 0, F_1 = 1; L_0 = 2, L_1 = 1. Throw CapExceeded for k > cap. */
Int fibonacci(unsigned long k, unsigned long cap = default_sequence_cap);
Int lucas(unsigned long k, unsigned long cap = default_sequence_cap);

/* Root of n when n is a perfect square (n >= 0), nullopt otherwise. */
std::optional<Int> perfect_square_root(Int const & n);

/* floor(sqrt(n)), n >= 0. */
Int isqrt(Int const & n);

/* All primes <= limit, computed once per limit and shared. */
std::vector<std::uint32_t> const & primes_up_to(std::uint32_t limit);

std::uint64_t to_u64(Int const & n);
Int from_u64(std::uint64_t v);

} // namespace quadclass::arith
