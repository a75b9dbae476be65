#pragma once

// Slow, independent reference implementations. Nothing here calls into the
// library, so agreement with it is evidence rather than tautology.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

using i64 = std::int64_t;
using i128 = __int128;

inline std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t n)
{
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e)
            out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0)
            return false;
    return true;
}

inline std::vector<std::uint64_t> sqrt_mod_scan(std::uint64_t a, std::uint64_t m)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t r = 0; r < m; ++r)
        if ((r * r) % m == a % m)
            out.push_back(r);
    return out;
}

/* Squarefree negative d -> field discriminant. */
inline i64 field_disc(i64 d)
{
    i64 r = ((d % 4) + 4) % 4;
    return r == 1 ? d : 4 * d;
}

inline bool is_squarefree(std::uint64_t n)
{
    for (auto [p, e] : trial_factor(n))
        if (e > 1)
            return false;
    return true;
}

inline bool is_fundamental(i64 D)
{
    if (D >= 0)
        return false;
    i64 r = ((D % 4) + 4) % 4;
    if (r == 1)
        return is_squarefree(static_cast<std::uint64_t>(-D));
    if (r != 0)
        return false;
    i64 q = D / 4;
    i64 qr = ((q % 4) + 4) % 4;
    return (qr == 2 || qr == 3) && is_squarefree(static_cast<std::uint64_t>(-q));
}

struct Form
{
    i64 a, b, c;
    auto operator<=>(Form const &) const = default;
};

inline i64 gcd3(i64 a, i64 b, i64 c)
{
    return std::gcd(std::gcd(std::llabs(a), std::llabs(b)), std::llabs(c));
}

inline Form reduce(Form f)
{
    for (;;) {
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.b > f.a || f.b <= -f.a) {
            // b' = b + 2ak in (-a, a]
            i64 two_a = 2 * f.a;
            i64 k = (f.a - f.b) / two_a;
            if ((f.a - f.b) % two_a < 0)
                --k;
            i64 nb = f.b + two_a * k;
            f.c = (nb * nb - (f.b * f.b - 4 * f.a * f.c)) / (4 * f.a);
            f.b = nb;
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0)
        f.b = -f.b;
    return f;
}

inline std::tuple<i64, i64, i64> xgcd(i64 a, i64 b)
{
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        std::tie(a, b) = std::make_tuple(b, a - q * b);
        std::tie(x0, x1) = std::make_tuple(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_tuple(y1, y0 - q * y1);
    }
    if (a < 0)
        return {-x0, -y0, -a};
    return {x0, y0, a};
}

inline i64 mod(i128 x, i64 m)
{
    i64 r = static_cast<i64>(x % m);
    return r < 0 ? r + m : r;
}

/* Textbook composition (Cohen, Algorithm 5.4.7), then reduction. */
inline Form compose(Form f1, Form f2)
{
    if (f1.a > f2.a)
        std::swap(f1, f2);
    i64 s = (f1.b + f2.b) / 2, n = f2.b - s;
    i64 y1, d;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        auto [u, v, g] = xgcd(f2.a, f1.a);
        (void)v;
        y1 = u;
        d = g;
    }
    i64 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        auto [x, y, g] = xgcd(s, d);
        x2 = x;
        y2 = -y;
        d1 = g;
    }
    i64 v1 = f1.a / d1, v2 = f2.a / d1;
    i64 r = mod(static_cast<i128>(y1) * y2 * n - static_cast<i128>(x2) * f2.c, v1);
    i64 b3 = f2.b + 2 * v2 * r;
    i64 a3 = v1 * v2;
    i64 D = f1.b * f1.b - 4 * f1.a * f1.c;
    i64 c3 = static_cast<i64>((static_cast<i128>(b3) * b3 - D) / (4 * static_cast<i128>(a3)));
    return reduce({a3, b3, c3});
}

inline Form identity(i64 D)
{
    return D % 4 == 0 ? Form{1, 0, -D / 4} : Form{1, 1, (1 - D) / 4};
}

/* All reduced primitive forms by a plain double loop. */
inline std::vector<Form> reduced_forms(i64 D)
{
    std::vector<Form> out;
    for (i64 a = 1; 3 * a * a <= -D; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b - D;
            if (num % (4 * a))
                continue;
            i64 c = num / (4 * a);
            if (c < a || (c == a && b < 0))
                continue;
            if (gcd3(a, b, c) == 1)
                out.push_back({a, b, c});
        }
    return out;
}

/* Reduced prime form of norm ell, if ell splits or ramifies. */
inline bool prime_form(i64 D, i64 ell, Form & out)
{
    for (i64 b = 0; b < 2 * ell; ++b) {
        if (((b * b - D) % (4 * ell)) == 0) {
            Form f{ell, b, (b * b - D) / (4 * ell)};
            if (gcd3(f.a, f.b, f.c) != 1)
                return false;
            out = reduce(f);
            return true;
        }
    }
    return false;
}

/* Order of the subgroup generated by the prime forms with ell <= bound.
 * The subgroup lives inside the reduced_forms(D) set, so once it has that
 * many elements further generators cannot change it and the scan stops. */
inline std::size_t prime_form_closure(i64 D, i64 bound)
{
    std::size_t const ceiling = reduced_forms(D).size();
    std::set<Form> group{identity(D)};
    for (i64 ell = 2; ell <= bound && group.size() < ceiling; ++ell) {
        if (!is_prime(static_cast<std::uint64_t>(ell)))
            continue;
        Form g;
        if (!prime_form(D, ell, g) || group.contains(g))
            continue;
        // group becomes <group, g>: multiply every element by powers of g
        std::vector<Form> current(group.begin(), group.end());
        Form power = g;
        while (!group.contains(power)) {
            for (auto const & h : current)
                group.insert(compose(h, power));
            power = compose(power, g);
        }
    }
    return group.size();
}

inline std::uint64_t order(Form f, i64 D)
{
    Form e = identity(D), x = f;
    std::uint64_t k = 1;
    while (x != e) {
        x = compose(x, f);
        ++k;
    }
    return k;
}

inline std::vector<unsigned long long> fibonacci_table(unsigned n)
{
    std::vector<unsigned long long> f{0, 1};
    while (f.size() <= n)
        f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    return f;
}

inline std::vector<unsigned long long> lucas_table(unsigned n)
{
    std::vector<unsigned long long> l{2, 1};
    while (l.size() <= n)
        l.push_back(l[l.size() - 1] + l[l.size() - 2]);
    return l;
}

} // namespace oracle
