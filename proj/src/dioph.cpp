#include "quadclass/dioph.hpp"

#include <array>
#include <stdexcept>

#include "quadclass/error.hpp"

namespace quadclass::dioph {

namespace {

Int pow_ui(Int const & b, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

struct Sporadic
{
    unsigned lambda_sq;
    unsigned long D1, D2, k;
};

constexpr std::array<Sporadic, 7> sporadic_cases{{
    {4, 13, 3, 2},
    {2, 7, 11, 3},
    {1, 2, 1, 3},
    {4, 7, 1, 2},
    {2, 1, 1, 5},
    {2, 1, 1, 13},
    {4, 1, 3, 7},
}};

} // namespace

DiophInstance DiophInstance::make(unsigned lambda_sq, Int D1, Int D2, Int k)
{
    if (lambda_sq != 1 && lambda_sq != 2 && lambda_sq != 4)
        throw std::invalid_argument("lambda^2 must be 1, 2 or 4");
    if (D1 < 1 || D2 < 1)
        throw std::invalid_argument("D1 and D2 must be positive");
    if (gcd(D1, D2) != 1)
        throw std::invalid_argument("D1 and D2 must be coprime");
    if (k < 2)
        throw std::invalid_argument("k must be at least 2");
    return {lambda_sq, std::move(D1), std::move(D2), std::move(k)};
}

SolutionList solve_bounded(DiophInstance const & inst, unsigned long y_max)
{
    SolutionList out{inst, y_max, {}, true};
    Int rhs = inst.lambda_sq;
    for (unsigned long y = 1; y <= y_max; ++y) {
        rhs *= inst.k;
        Int t = rhs - inst.D2;
        if (sgn(t) <= 0 || !mpz_divisible_p(t.get_mpz_t(), inst.D1.get_mpz_t()))
            continue;
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), inst.D1.get_mpz_t());
        if (auto x = arith::perfect_square_root(t); x && *x > 0)
            out.solutions.push_back({*x, y});
    }
    return out;
}

SolutionList count_lemma23(Int const & D, Int const & q, unsigned long y_max)
{
    if (D <= 3)
        throw std::invalid_argument("count_lemma23: D must exceed 3");
    if (q < 3 || !arith::is_prime(q))
        throw std::invalid_argument("count_lemma23: q must be an odd prime");
    return solve_bounded(DiophInstance::make(2, D, Int(1), q), y_max);
}

std::optional<FWitness> in_family_F(Int const & D1, Int const & D2, Int const & k, FibonacciShift shift,
                                    unsigned long cap)
{
    unsigned long const step = shift == FibonacciShift::Double ? 2 : 1;
    for (unsigned long j = 2;; ++j) {
        // indices up to j + step are touched below
        if (j + step > cap)
            throw CapExceeded("Fibonacci family scan reached index cap " + std::to_string(cap));
        Int Fj = arith::fibonacci(j, cap);
        if (Fj > k)
            return std::nullopt;
        if (Fj != k)
            continue;
        for (int eps : {1, -1}) {
            long d1_index = static_cast<long>(j) - static_cast<long>(step) * eps;
            long d2_index = static_cast<long>(j) + eps;
            if (d1_index < 0)
                continue;
            if (arith::fibonacci(static_cast<unsigned long>(d1_index), cap) == D1 &&
                arith::lucas(static_cast<unsigned long>(d2_index), cap) == D2)
                return FWitness{j, eps};
        }
    }
}

std::optional<unsigned long> in_family_G(Int const & D1, Int const & D2, Int const & k)
{
    if (D1 != 1 || k < 2)
        return std::nullopt;
    Int t = D2 + 1;
    if (!mpz_divisible_ui_p(t.get_mpz_t(), 4))
        return std::nullopt;
    t /= 4;
    unsigned long r = 0;
    while (t > 1 && mpz_divisible_p(t.get_mpz_t(), k.get_mpz_t())) {
        t /= k;
        ++r;
    }
    if (t == 1 && r >= 1)
        return r;
    return std::nullopt;
}

std::optional<HWitness> in_family_H(Int const & D1, Int const & D2, Int const & k, unsigned lambda_sq,
                                    unsigned long r_max, Int const & s_max)
{
    // 3 D1 s^2 - D2 = +-lambda^2 pins s^2 to (D2 +- lambda^2) / (3 D1),
    // so the bounded scan over s reduces to two candidates.
    Int three_d1 = 3 * D1;
    for (int sign : {1, -1}) {
        Int num = D2 + sign * static_cast<long>(lambda_sq);
        if (sgn(num) <= 0 || !mpz_divisible_p(num.get_mpz_t(), three_d1.get_mpz_t()))
            continue;
        auto s = arith::perfect_square_root(Int(num / three_d1));
        if (!s || *s < 1 || *s > s_max)
            continue;
        Int lhs = D1 * *s * *s + D2;
        Int rhs = lambda_sq;
        for (unsigned long r = 1; r <= r_max && rhs <= lhs; ++r) {
            rhs *= k;
            if (rhs == lhs)
                return HWitness{r, *s};
        }
    }
    return std::nullopt;
}

bool is_sporadic(unsigned lambda_sq, Int const & D1, Int const & D2, Int const & k)
{
    for (auto const & c : sporadic_cases)
        if (c.lambda_sq == lambda_sq && D1 == c.D1 && D2 == c.D2 && k == c.k)
            return true;
    return false;
}

std::vector<IntegerPoint> siegel_scan(Int const & d0, unsigned long p, Int const & x_max)
{
    if (d0 == 0)
        throw std::invalid_argument("siegel_scan: d0 must be nonzero");
    std::vector<IntegerPoint> out;
    for (Int x = 1; x <= x_max; ++x) {
        Int num = 1 - 2 * pow_ui(x, p);
        if (!mpz_divisible_p(num.get_mpz_t(), d0.get_mpz_t()))
            continue;
        if (auto y = arith::perfect_square_root(Int(num / d0)))
            out.push_back({x, *y});
    }
    return out;
}

} // namespace quadclass::dioph
