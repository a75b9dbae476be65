#pragma once

/* Word-size modular arithmetic for the inner loops of class counting. */

#include <cstdint>
#include <optional>

namespace quadclass::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 e, u64 m)
{
    u64 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/* Inverse of a modulo m, gcd(a, m) = 1 assumed. */
inline u64 invmod(u64 a, u64 m)
{
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(m);
    std::int64_t nr = static_cast<std::int64_t>(a % m);
    while (nr) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0)
        t += static_cast<std::int64_t>(m);
    return static_cast<u64>(t);
}

/* Tonelli-Shanks modulo an odd prime p; nullopt if a is a non-residue. */
inline std::optional<u64> sqrt_mod_prime(u64 a, u64 p)
{
    a %= p;
    if (a == 0)
        return u64{0};
    if (powmod(a, (p - 1) / 2, p) != 1)
        return std::nullopt;
    if (p % 4 == 3)
        return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1)
        ++z;
    u64 c = powmod(z, q, p);
    u64 x = powmod(a, (q + 1) / 2, p);
    u64 t = powmod(a, q, p);
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        u64 t2 = t;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        u64 b = c;
        for (unsigned j = 0; j + 1 < m - i; ++j)
            b = mulmod(b, b, p);
        x = mulmod(x, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        m = i;
    }
    return x;
}

inline u64 gcd_u64(u64 a, u64 b)
{
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace quadclass::detail
