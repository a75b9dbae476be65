#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "quadclass/dioph.hpp"
#include "quadclass/error.hpp"

using namespace quadclass;
using arith::Int;
using dioph::DiophInstance;
using dioph::Solution;

namespace {

Int ipow(Int b, unsigned long e)
{
    Int r = 1;
    while (e--)
        r *= b;
    return r;
}

bool satisfies(DiophInstance const & inst, Solution const & s)
{
    return inst.D1 * s.x * s.x + inst.D2 == inst.lambda_sq * ipow(inst.k, s.y);
}

std::vector<Solution> sols(unsigned l, long d1, long d2, long k, unsigned long y_max)
{
    return dioph::solve_bounded(DiophInstance::make(l, Int(d1), Int(d2), Int(k)), y_max).solutions;
}

bool explained(unsigned l, long d1, long d2, long k)
{
    return dioph::is_sporadic(l, Int(d1), Int(d2), Int(k)) || dioph::in_family_F(Int(d1), Int(d2), Int(k)) ||
           dioph::in_family_G(Int(d1), Int(d2), Int(k)) || dioph::in_family_H(Int(d1), Int(d2), Int(k), l);
}

} // namespace

TEST_CASE("instance validation")
{
    CHECK_THROWS_AS(DiophInstance::make(3, 1, 1, 5), std::invalid_argument);
    CHECK_THROWS_AS(DiophInstance::make(2, 2, 4, 5), std::invalid_argument);
    CHECK_THROWS_AS(DiophInstance::make(2, 0, 1, 5), std::invalid_argument);
    CHECK_THROWS_AS(DiophInstance::make(2, 1, 1, 1), std::invalid_argument);
    CHECK_NOTHROW(DiophInstance::make(1, 2, 1, 3));
}

TEST_CASE("exceptional instances with two solutions")
{
    CHECK(sols(2, 1, 1, 5, 10) == std::vector<Solution>{{3, 1}, {7, 2}});
    CHECK(sols(2, 1, 1, 13, 10) == std::vector<Solution>{{5, 1}, {239, 4}});
    CHECK(sols(4, 1, 3, 7, 10) == std::vector<Solution>{{5, 1}, {37, 3}});
    CHECK(sols(4, 13, 3, 2, 100).size() >= 2);
    CHECK(sols(2, 7, 11, 3, 100).size() == 2);
    CHECK(sols(4, 7, 1, 2, 100).size() == 2);
    // lambda^2 = 1 entry: three candidate solutions, y in {1, 2, 5}
    auto odd = sols(1, 2, 1, 3, 100);
    REQUIRE(odd.size() == 3);
    CHECK(odd[0].y == 1);
    CHECK(odd[1].y == 2);
    CHECK(odd[2].y == 5);
}

TEST_CASE("every reported solution re-substitutes exactly; results are sorted and monotone in y_max")
{
    for (unsigned l : {1u, 2u, 4u})
        for (long d1 = 1; d1 <= 15; ++d1)
            for (long d2 = 1; d2 <= 15; ++d2) {
                if (std::gcd(d1, d2) != 1)
                    continue;
                for (long k : {2L, 3L, 5L, 7L}) {
                    auto inst = DiophInstance::make(l, Int(d1), Int(d2), Int(k));
                    auto small = dioph::solve_bounded(inst, 20).solutions;
                    auto large = dioph::solve_bounded(inst, 60).solutions;
                    for (auto const & s : large) {
                        REQUIRE(satisfies(inst, s));
                        REQUIRE(s.x >= 1);
                    }
                    for (std::size_t i = 1; i < large.size(); ++i)
                        REQUIRE(large[i - 1].y < large[i].y);
                    REQUIRE(small.size() <= large.size());
                    REQUIRE(std::equal(small.begin(), small.end(), large.begin()));
                }
            }
}

TEST_CASE("bounded solver matches a floating-free brute force over x for small cases")
{
    // D1 x^2 + D2 <= lambda^2 k^y_max with y_max = 12, k = 3 -> x <= 1000
    for (long d1 = 1; d1 <= 6; ++d1)
        for (long d2 = 1; d2 <= 6; ++d2) {
            if (std::gcd(d1, d2) != 1)
                continue;
            auto got = sols(2, d1, d2, 3, 12);
            std::vector<Solution> want;
            long rhs = 2;
            for (unsigned long y = 1; y <= 12; ++y) {
                rhs *= 3;
                for (long x = 1; d1 * x * x + d2 <= rhs; ++x)
                    if (d1 * x * x + d2 == rhs)
                        want.push_back({Int(x), y});
            }
            REQUIRE(got == want);
        }
}

TEST_CASE("Dx^2 + 1 = 2q^y examples")
{
    auto a = dioph::count_lemma23(Int(5), Int(3), 50);
    CHECK(a.solutions == std::vector<Solution>{{1, 1}});
    CHECK(dioph::count_lemma23(Int(53), Int(3), 50).solutions.size() <= 1);
    CHECK(dioph::count_lemma23(Int(7), Int(5), 50).solutions.size() <= 1);
    CHECK_THROWS_AS(dioph::count_lemma23(Int(3), Int(3), 50), std::invalid_argument);
    CHECK_THROWS_AS(dioph::count_lemma23(Int(5), Int(9), 50), std::invalid_argument);
}

TEST_CASE("at most one solution of Dx^2 + 1 = 2q^y on a small box")
{
    for (long D = 4; D <= 600; ++D)
        for (long q = 3; q <= 53; q += 2) {
            if (!oracle::is_prime(q) || std::gcd(D, 2 * q) != 1)
                continue;
            REQUIRE_MESSAGE(dioph::count_lemma23(Int(D), Int(q), 50).solutions.size() <= 1, "D=" << D << " q=" << q);
        }
}

TEST_CASE("Fibonacci family")
{
    auto w = dioph::in_family_F(Int(3), Int(1), Int(1));
    REQUIRE(w);
    CHECK(w->index == 2);
    CHECK(w->epsilon == -1);
    CHECK_FALSE(dioph::in_family_F(Int(2), Int(2), Int(2)));
    // j = 4, eps = 1: (F_2, L_5, F_4) = (1, 11, 3); (1, 7, 3) is not in the family
    CHECK(dioph::in_family_F(Int(1), Int(11), Int(3)));
    CHECK_FALSE(dioph::in_family_F(Int(1), Int(7), Int(3)));
    // the two index conventions differ: (F_3, L_5, F_4) = (2, 11, 3)
    CHECK_FALSE(dioph::in_family_F(Int(2), Int(11), Int(3)));
    CHECK(dioph::in_family_F(Int(2), Int(11), Int(3), dioph::FibonacciShift::Single));
    CHECK_THROWS_AS(dioph::in_family_F(Int(1), Int(1), Int("1000000000000000000000000000000000000000000000000000000000000000"),
                                       dioph::FibonacciShift::Double, 20),
                    CapExceeded);
}

TEST_CASE("family G")
{
    CHECK(dioph::in_family_G(Int(1), Int(7), Int(2)) == 1UL);
    CHECK(dioph::in_family_G(Int(1), Int(15), Int(2)) == 2UL);
    CHECK_FALSE(dioph::in_family_G(Int(2), Int(7), Int(2)));
    CHECK_FALSE(dioph::in_family_G(Int(1), Int(3), Int(2)));   // 4 = 4 k^0 needs r >= 1
}

TEST_CASE("family H agrees with a double scan over r and s")
{
    for (unsigned l : {2u, 4u})
        for (long d1 = 1; d1 <= 12; ++d1)
            for (long d2 = 1; d2 <= 40; ++d2)
                for (long k : {2L, 3L, 5L, 7L, 11L, 13L}) {
                    bool want = false;
                    for (long s = 1; s <= 200 && !want; ++s) {
                        long t = 3 * d1 * s * s - d2;
                        if (t != static_cast<long>(l) && t != -static_cast<long>(l))
                            continue;
                        Int rhs = l;
                        for (int r = 1; r <= 40 && !want; ++r) {
                            rhs *= k;
                            want = rhs == d1 * s * s + d2;
                        }
                    }
                    REQUIRE_MESSAGE(dioph::in_family_H(Int(d1), Int(d2), Int(k), l).has_value() == want,
                                    l << " " << d1 << " " << d2 << " " << k);
                }
}

TEST_CASE("sporadic list")
{
    CHECK(dioph::is_sporadic(2, Int(1), Int(1), Int(5)));
    CHECK(dioph::is_sporadic(4, Int(13), Int(3), Int(2)));
    CHECK_FALSE(dioph::is_sporadic(2, Int(5), Int(1), Int(3)));
}

TEST_CASE("two or more solutions are explained by the exceptional families when lambda^2 = 2, D2 = 1, D1 > 3")
{
    for (long d1 = 4; d1 <= 400; ++d1)
        for (long k = 3; k <= 97; k += 2) {
            if (!oracle::is_prime(k) || std::gcd(d1, k) != 1)
                continue;
            auto s = sols(2, d1, 1, k, 60);
            if (s.size() >= 2)
                REQUIRE_MESSAGE(explained(2, d1, 1, k), d1 << " " << k);
        }
}

TEST_CASE("general box: instances with two solutions outside the families are reported, each verified")
{
    // Known to fail in general at desk scale; this records the instances
    // rather than asserting the general statement.
    std::size_t multi = 0, outside = 0;
    for (unsigned l : {2u, 4u})
        for (long d1 = 1; d1 <= 40; ++d1)
            for (long d2 = 1; d2 <= 40; ++d2) {
                if (std::gcd(d1, d2) != 1)
                    continue;
                for (long k = 2; k <= 40; ++k) {
                    if (!oracle::is_prime(k))
                        continue;
                    auto inst = DiophInstance::make(l, Int(d1), Int(d2), Int(k));
                    auto s = dioph::solve_bounded(inst, 60).solutions;
                    if (s.size() < 2)
                        continue;
                    ++multi;
                    for (auto const & x : s)
                        REQUIRE(satisfies(inst, x));
                    if (!explained(l, d1, d2, k))
                        ++outside;
                }
            }
    MESSAGE(multi << " instances with >= 2 solutions, " << outside << " outside the exceptional families");
    CHECK(multi > outside);
    // one documented case: x^2 + 9 = 2 * 5^y at (1, 1) and (79, 5)
    CHECK(sols(2, 1, 9, 5, 60) == std::vector<Solution>{{1, 1}, {79, 5}});
    CHECK_FALSE(explained(2, 1, 9, 5));
}

TEST_CASE("Siegel-type scan")
{
    auto a = dioph::siegel_scan(Int(-53), 3, Int(100));
    CHECK(std::find(a.begin(), a.end(), dioph::IntegerPoint{3, 1}) != a.end());
    auto b = dioph::siegel_scan(Int(-249), 3, Int(100));
    CHECK(std::find(b.begin(), b.end(), dioph::IntegerPoint{5, 1}) != b.end());
    for (long d0 : {-1L, -53L, -7L, -3L, -249L}) {
        auto got = dioph::siegel_scan(Int(d0), 3, Int(100));
        std::vector<dioph::IntegerPoint> want;
        for (long x = 1; x <= 100; ++x) {
            long num = 1 - 2 * x * x * x;
            if (num % d0)
                continue;
            long v = num / d0;
            if (v < 0)
                continue;
            long y = 0;
            while ((y + 1) * (y + 1) <= v)
                ++y;
            if (y * y == v)
                want.push_back({Int(x), Int(y)});
        }
        REQUIRE(got == want);
    }
    CHECK_THROWS_AS(dioph::siegel_scan(Int(0), 3, Int(10)), std::invalid_argument);
}
