#include "quadclass/arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "quadclass/error.hpp"

namespace quadclass::arith {

namespace {

/* Sorenson and Webster: the first 13 prime bases are a complete witness
 * set below this value. */
Int const & deterministic_mr_limit()
{
    static Int const limit("3317044064679887385961981");
    return limit;
}

constexpr unsigned long mr_bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr int random_rounds = 64;

bool mr_round(Int const & n, Int const & n_minus_1, Int const & odd_part,
              unsigned long twos, Int const & base)
{
    Int x;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), odd_part.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1)
        return true;
    for (unsigned long i = 1; i < twos; ++i) {
        x = x * x % n;
        if (x == n_minus_1)
            return true;
        if (x == 1)
            return false;
    }
    return false;
}

Int pow_ui(Int const & base, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

/* Brent's cycle-finding rho with batched gcds. Returns a nontrivial
 * divisor of the odd composite n, or 0 after the iteration budget. */
Int brent_rho(Int const & n, std::uint64_t budget)
{
    constexpr std::uint64_t batch = 128;
    std::uint64_t used = 0;
    for (unsigned long c = 1; used < budget; ++c) {
        Int y = 2, x, ys, q = 1, g = 1, diff;
        std::uint64_t r = 1;
        auto step = [&](Int & v) {
            v = (v * v + c) % n;
            ++used;
        };
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i)
                step(y);
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    step(y);
                    diff = x - y;
                    q = q * abs(diff) % n;
                }
                k += lim;
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                if (used >= budget)
                    return 0;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                step(ys);
                diff = x - ys;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1 && used < budget);
        }
        if (g != n && g != 1)
            return g;
    }
    return 0;
}

void split_cofactor(Int const & n, FactorBudget const & budget,
                    std::map<Int, unsigned> & out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    for (unsigned long k = 2; mpz_sizeinbase(n.get_mpz_t(), 2) / k >= 2; ++k) {
        Int root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
            std::map<Int, unsigned> sub;
            split_cofactor(root, budget, sub);
            for (auto const & [p, e] : sub)
                out[p] += e * static_cast<unsigned>(k);
            return;
        }
    }
    Int d = brent_rho(n, budget.rho_iterations);
    if (d == 0)
        throw EffortExceeded("rho iteration cap reached factoring " + n.get_str());
    split_cofactor(d, budget, out);
    split_cofactor(Int(n / d), budget, out);
}

} // namespace

Int Factorization::product() const
{
    Int r = 1;
    for (auto const & f : factors)
        r *= pow_ui(f.prime, f.exponent);
    return r;
}

std::vector<std::uint32_t> const & primes_up_to(std::uint32_t limit)
{
    static std::mutex mu;
    static std::map<std::uint32_t, std::vector<std::uint32_t>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(limit);
    if (it != cache.end())
        return it->second;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return cache.emplace(limit, std::move(primes)).first->second;
}

std::uint64_t to_u64(Int const & n)
{
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, n.get_mpz_t());
    return v;
}

Int from_u64(std::uint64_t v)
{
    Int r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return r;
}

bool is_prime(Int const & n)
{
    if (n < 2)
        return false;
    for (unsigned long p : mr_bases) {
        if (n == p)
            return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p))
            return false;
    }
    Int n_minus_1 = n - 1;
    Int odd_part = n_minus_1;
    unsigned long twos = mpz_scan1(odd_part.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(odd_part.get_mpz_t(), odd_part.get_mpz_t(), twos);

    if (n < deterministic_mr_limit()) {
        for (unsigned long b : mr_bases)
            if (!mr_round(n, n_minus_1, odd_part, twos, Int(b)))
                return false;
        return true;
    }
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(n);
    Int span = n - 3;
    for (int i = 0; i < random_rounds; ++i) {
        Int base = rng.get_z_range(span) + 2;
        if (!mr_round(n, n_minus_1, odd_part, twos, base))
            return false;
    }
    return true;
}

Factorization factor(Int const & n, FactorBudget const & budget)
{
    if (n < 1)
        throw std::invalid_argument("factor: n must be positive");
    Factorization result{n, {}};
    Int rest = n;
    std::map<Int, unsigned> found;

    auto bound = static_cast<std::uint32_t>(std::min<std::uint64_t>(budget.trial_bound, 0xffffffffu));
    bool exhausted = true;
    for (std::uint32_t p : primes_up_to(bound)) {
        if (Int(p) * p > rest) {
            exhausted = false;
            break;
        }
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            }
            found[Int(p)] = e;
        }
    }
    if (rest > 1) {
        if (!exhausted)
            ++found[rest];
        else
            split_cofactor(rest, budget, found);
    }
    for (auto const & [p, e] : found)
        result.factors.push_back({p, e});
    return result;
}

SquarefreePart squarefree_part_signed(Int const & n, FactorBudget const & budget)
{
    if (n == 0)
        throw std::invalid_argument("squarefree_part_signed: n must be nonzero");
    Int d = sgn(n) < 0 ? -1 : 1;
    Int s = 1;
    for (auto const & f : factor(abs(n), budget).factors) {
        if (f.exponent % 2)
            d *= f.prime;
        s *= pow_ui(f.prime, f.exponent / 2);
    }
    return {d, s};
}

int kronecker(Int const & a, Int const & n)
{
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

namespace {

Int sqrt_mod_odd_prime(Int const & a, Int const & p)
{
    if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 3) {
        Int r;
        Int e = (p + 1) / 4;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    Int q = p - 1;
    unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
    Int z = 2;
    while (kronecker(z, p) != -1)
        ++z;
    Int c, x, t, e = (q + 1) / 2;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;
    while (t != 1) {
        unsigned long i = 0;
        Int t2 = t;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        Int b = c;
        for (unsigned long j = 0; j + 1 < m - i; ++j)
            b = b * b % p;
        x = x * b % p;
        c = b * b % p;
        t = t * c % p;
        m = i;
    }
    return x;
}

Int mod_floor(Int const & a, Int const & m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

/* Roots of a unit u modulo p^e. */
std::vector<Int> unit_roots(Int const & u, Int const & p, unsigned e)
{
    Int mod = pow_ui(p, e);
    if (p == 2) {
        if (e == 1)
            return {Int(1)};
        if (e == 2)
            return mod_floor(u, 4) == 1 ? std::vector<Int>{1, 3} : std::vector<Int>{};
        if (mod_floor(u, 8) != 1)
            return {};
        Int r = 1;
        for (unsigned k = 3; k < e; ++k) {
            Int m1 = pow_ui(Int(2), k + 1);
            if (mod_floor(r * r - u, m1) != 0)
                r += pow_ui(Int(2), k - 1);
        }
        Int half = mod / 2;
        std::vector<Int> out{mod_floor(r, mod), mod_floor(-r, mod),
                             mod_floor(r + half, mod), mod_floor(-r + half, mod)};
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    Int a = mod_floor(u, p);
    if (kronecker(a, p) != 1)
        return {};
    Int r = sqrt_mod_odd_prime(a, p);
    Int pk = p;
    for (unsigned k = 1; k < e; ++k) {
        pk *= p;
        Int two_r = 2 * r, inv;
        mpz_invert(inv.get_mpz_t(), two_r.get_mpz_t(), pk.get_mpz_t());
        r = mod_floor(r - (r * r - u) * inv, pk);
    }
    Int other = mod_floor(-r, mod);
    if (other == r)
        return {r};
    return r < other ? std::vector<Int>{r, other} : std::vector<Int>{other, r};
}

} // namespace

std::vector<Int> sqrt_mod_prime_power(Int const & a, Int const & p, unsigned e)
{
    Int mod = pow_ui(p, e);
    Int x = mod_floor(a, mod);
    std::vector<Int> out;
    if (x == 0) {
        Int step = pow_ui(p, (e + 1) / 2);
        for (Int r = 0; r < mod; r += step)
            out.push_back(r);
        return out;
    }
    unsigned long v = mpz_remove(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    if (v % 2)
        return {};
    unsigned half = static_cast<unsigned>(v / 2);
    unsigned rest = e - static_cast<unsigned>(v);
    Int lift = pow_ui(p, rest);
    Int scale = pow_ui(p, half);
    Int copies = pow_ui(p, half);
    for (Int const & y0 : unit_roots(x, p, rest))
        for (Int t = 0; t < copies; ++t)
            out.push_back(mod_floor(scale * (y0 + t * lift), mod));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Int> crt_combine(std::vector<Int> const & xs, Int const & m,
                             std::vector<Int> const & ys, Int const & n)
{
    Int inv;
    Int m_mod_n = mod_floor(m, n);
    if (n == 1)
        return xs;
    mpz_invert(inv.get_mpz_t(), m_mod_n.get_mpz_t(), n.get_mpz_t());
    std::vector<Int> out;
    out.reserve(xs.size() * ys.size());
    for (Int const & x : xs)
        for (Int const & y : ys)
            out.push_back(x + m * mod_floor((y - x) * inv, n));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Int> sqrt_mod(Int const & a, Int const & m, FactorBudget const & budget)
{
    if (m < 1)
        throw std::invalid_argument("sqrt_mod: modulus must be positive");
    if (m == 1)
        return {Int(0)};
    std::vector<Int> acc{Int(0)};
    Int acc_mod = 1;
    for (auto const & f : factor(m, budget).factors) {
        auto roots = sqrt_mod_prime_power(a, f.prime, f.exponent);
        if (roots.empty())
            return {};
        Int pe = pow_ui(f.prime, f.exponent);
        acc = crt_combine(acc, acc_mod, roots, pe);
        acc_mod *= pe;
    }
    return acc;
}

Int fibonacci(unsigned long k, unsigned long cap)
{
    if (k > cap)
        throw CapExceeded("fibonacci index " + std::to_string(k) + " above cap " + std::to_string(cap));
    Int r;
    mpz_fib_ui(r.get_mpz_t(), k);
    return r;
}

Int lucas(unsigned long k, unsigned long cap)
{
    if (k > cap)
        throw CapExceeded("lucas index " + std::to_string(k) + " above cap " + std::to_string(cap));
    Int r;
    mpz_lucnum_ui(r.get_mpz_t(), k);
    return r;
}

std::optional<Int> perfect_square_root(Int const & n)
{
    if (sgn(n) < 0 || !mpz_perfect_square_p(n.get_mpz_t()))
        return std::nullopt;
    return isqrt(n);
}

Int isqrt(Int const & n)
{
    if (sgn(n) < 0)
        throw std::invalid_argument("isqrt of a negative number");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

} // namespace quadclass::arith
