// Reduced-form enumeration for class_number and reduced_forms.
//
// For each a <= sqrt(|D|/3) the admissible b in (-a, a] are the square
// roots of D modulo 4a, reduced mod 2a. Roots are assembled by CRT from
// prime-power pieces: a smallest-prime-factor sieve factors a, roots of D
// modulo each odd prime are precomputed once, Hensel lifting handles
// higher powers, and primes dividing 2D use cached generic root lists.

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "quadclass/detail/modarith.hpp"
#include "quadclass/error.hpp"
#include "quadclass/qform.hpp"

namespace quadclass::qform {

namespace {

using detail::u64;
using detail::u128;

class Enumerator
{
  public:
    Enumerator(u64 abs_disc, unsigned threads)
        : abs_d_(abs_disc)
        , threads_(threads)
    {
        a_max_ = static_cast<u64>(arith::to_u64(arith::isqrt(arith::from_u64(abs_d_ / 3))));
        sieve();
        for (unsigned k = 0; (u64{1} << k) <= 4 * std::max<u64>(a_max_, 1); ++k)
            two_roots_.push_back(generic_roots(2, k));
    }

    u64 a_max() const { return a_max_; }

    /* Calls visit(a, b, c) for every reduced primitive form with
     * a in [lo, hi], in increasing (a, b) order within the range. */
    template <class Visit>
    void run(u64 lo, u64 hi, Visit && visit) const
    {
        std::vector<u64> acc, next;
        for (u64 a = lo; a <= hi; ++a)
            visit_a(a, acc, next, visit);
    }

    template <class Visit>
    void visit_a(u64 a, std::vector<u64> & acc, std::vector<u64> & next, Visit && visit) const
    {
        u64 rest = a;
        unsigned twos = 0;
        while ((rest & 1) == 0) {
            rest >>= 1;
            ++twos;
        }
        auto const & r2 = two_roots_[twos + 2];
        if (r2.empty())
            return;
        acc.assign(r2.begin(), r2.end());
        u64 mod = u64{1} << (twos + 2);

        while (rest > 1) {
            u64 ell = spf_[rest];
            unsigned e = 0;
            u64 pe = 1;
            while (rest % ell == 0) {
                rest /= ell;
                pe *= ell;
                ++e;
            }
            u64 r0 = root_[ell];
            u64 x1 = 0, x2 = 0;
            std::vector<u64> const * list = nullptr;
            if (abs_d_ % ell == 0) {
                list = &divisor_roots(ell, e);
                if (list->empty())
                    return;
            } else {
                if (r0 == 0)
                    return;
                x1 = lift(r0, ell, e);
                x2 = pe - x1;
            }
            u64 inv = detail::invmod(mod % pe, pe);
            next.clear();
            for (u64 x : acc) {
                auto add = [&](u64 y) {
                    u64 t = detail::mulmod((y + pe - x % pe) % pe, inv, pe);
                    next.push_back(x + mod * t);
                };
                if (list) {
                    for (u64 y : *list)
                        add(y);
                } else {
                    add(x1);
                    add(x2);
                }
            }
            acc.swap(next);
            mod *= pe;
        }

        u64 two_a = 2 * a;
        std::sort(acc.begin(), acc.end());
        for (u64 x : acc) {
            if (x >= two_a)
                break;
            std::int64_t b = x > a ? static_cast<std::int64_t>(x) - static_cast<std::int64_t>(two_a)
                                   : static_cast<std::int64_t>(x);
            u64 babs = static_cast<u64>(b < 0 ? -b : b);
            u128 num = static_cast<u128>(babs) * babs + abs_d_;
            u64 c = static_cast<u64>(num / (4 * a));
            if (c < a)
                continue;
            if (b < 0 && (babs == a || c == a))
                continue;
            if (detail::gcd_u64(detail::gcd_u64(a, babs), c) != 1)
                continue;
            visit(a, b, c);
        }
    }

    unsigned threads() const { return threads_; }

  private:
    void sieve()
    {
        std::size_t n = static_cast<std::size_t>(a_max_) + 1;
        spf_.assign(n, 0);
        root_.assign(n, 0);
        for (u64 i = 2; i < n; ++i) {
            if (spf_[i])
                continue;
            for (u64 j = i; j < n; j += i)
                if (!spf_[j])
                    spf_[j] = static_cast<std::uint32_t>(i);
            if (i == 2)
                continue;
            u64 dm = (i - abs_d_ % i) % i;
            if (dm == 0) {
                std::vector<std::vector<u64>> lists;
                for (u64 pe = 1; pe <= a_max_; pe *= i)
                    lists.push_back(generic_roots(i, static_cast<unsigned>(lists.size())));
                divisors_.emplace(i, std::move(lists));
                continue;
            }
            auto r = detail::sqrt_mod_prime(dm, i);
            root_[i] = r ? static_cast<std::uint32_t>(*r) : 0;
        }
    }

    std::vector<u64> generic_roots(u64 ell, unsigned e) const
    {
        arith::Int D = -arith::from_u64(abs_d_);
        std::vector<u64> out;
        if (e == 0) {
            out.push_back(0);
            return out;
        }
        for (auto const & r : arith::sqrt_mod_prime_power(D, arith::from_u64(ell), e))
            out.push_back(arith::to_u64(r));
        return out;
    }

    std::vector<u64> const & divisor_roots(u64 ell, unsigned e) const
    {
        return divisors_.at(ell)[e];
    }

    u64 lift(u64 r, u64 ell, unsigned e) const
    {
        u64 m = ell;
        for (unsigned k = 1; k < e; ++k) {
            m *= ell;
            u64 dm = (m - abs_d_ % m) % m;
            u64 f = (detail::mulmod(r, r, m) + m - dm) % m;
            u64 inv = detail::invmod((2 * r) % m, m);
            r = (r + m - detail::mulmod(f, inv, m)) % m;
        }
        return r;
    }

    u64 abs_d_;
    unsigned threads_;
    u64 a_max_ = 0;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> root_;
    std::vector<std::vector<u64>> two_roots_;
    std::map<u64, std::vector<std::vector<u64>>> divisors_;
};

u64 checked_abs_disc(Discriminant const & D, Limits const & limits)
{
    Int abs_d = -D.value();
    if (abs_d > limits.enum_bound)
        throw BoundExceeded("|D| = " + abs_d.get_str() + " above enumeration bound " +
                            limits.enum_bound.get_str());
    if (mpz_sizeinbase(abs_d.get_mpz_t(), 2) > 62)
        throw BoundExceeded("|D| = " + abs_d.get_str() + " above the word-size enumeration limit 2^62");
    return arith::to_u64(abs_d);
}

unsigned worker_count(unsigned requested)
{
    if (requested)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

constexpr u64 block = 1 << 14;

} // namespace

std::uint64_t class_number(Discriminant const & D, Limits const & limits)
{
    Enumerator en(checked_abs_disc(D, limits), worker_count(limits.threads));
    u64 a_max = en.a_max();
    u64 blocks = (a_max + block - 1) / block;
    std::atomic<u64> next_block{0};
    std::atomic<u64> total{0};
    auto work = [&] {
        u64 local = 0;
        for (u64 i; (i = next_block.fetch_add(1)) < blocks;) {
            u64 lo = i * block + 1;
            u64 hi = std::min(a_max, lo + block - 1);
            en.run(lo, hi, [&](u64, std::int64_t, u64) { ++local; });
        }
        total += local;
    };
    unsigned n = static_cast<unsigned>(std::min<u64>(en.threads(), std::max<u64>(blocks, 1)));
    if (n <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t)
            pool.emplace_back(work);
    }
    return total.load();
}

std::vector<QuadForm> reduced_forms(Discriminant const & D, Limits const & limits)
{
    Enumerator en(checked_abs_disc(D, limits), 1);
    std::vector<QuadForm> out;
    en.run(1, en.a_max(), [&](u64 a, std::int64_t b, u64 c) {
        if (out.size() >= limits.struct_bound)
            throw BoundExceeded("more than " + std::to_string(limits.struct_bound) + " reduced forms");
        out.push_back({arith::from_u64(a), Int(static_cast<long>(b)), arith::from_u64(c)});
    });
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace quadclass::qform
