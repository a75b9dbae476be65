#include "quadclass/qform.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "quadclass/error.hpp"

namespace quadclass::qform {

namespace {

Int floor_mod(Int const & a, Int const & m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool squarefree(Int const & n, arith::FactorBudget const & budget)
{
    for (auto const & f : arith::factor(abs(n), budget).factors)
        if (f.exponent > 1)
            return false;
    return true;
}

/* b <- b mod 2a into (-a, a], adjusting c to keep the discriminant. */
void normalize(QuadForm & f)
{
    Int two_a = 2 * f.a;
    Int r = floor_mod(f.b, two_a);
    if (r > f.a)
        r -= two_a;
    if (r == f.b)
        return;
    Int q = (f.b - r) / two_a;      // b = r + 2 a q
    // c' = c - q (b + r) / 2 keeps b^2 - 4ac fixed
    f.c -= q * ((f.b + r) / 2);
    f.b = r;
}

QuadForm principal_form(Int const & disc)
{
    if (mpz_even_p(disc.get_mpz_t()))
        return {Int(1), Int(0), Int(-disc / 4)};
    return {Int(1), Int(1), Int((1 - disc) / 4)};
}

} // namespace

Discriminant::Discriminant(Int value, bool fundamental)
    : value_(std::move(value))
    , fundamental_(fundamental)
{
}

Discriminant::Discriminant(Int value, arith::FactorBudget const & budget)
    : value_(std::move(value))
    , fundamental_(false)
{
    if (sgn(value_) >= 0)
        throw std::invalid_argument("discriminant must be negative: " + value_.get_str());
    unsigned long r = mpz_fdiv_ui(value_.get_mpz_t(), 4);
    if (r != 0 && r != 1)
        throw std::invalid_argument("discriminant must be 0 or 1 mod 4: " + value_.get_str());
    if (r == 1) {
        fundamental_ = squarefree(value_, budget);
    } else {
        Int d = value_ / 4;
        unsigned long dm = mpz_fdiv_ui(d.get_mpz_t(), 4);
        fundamental_ = (dm == 2 || dm == 3) && squarefree(d, budget);
    }
}

Discriminant Discriminant::of_field(Int const & n, arith::FactorBudget const & budget)
{
    if (sgn(n) >= 0)
        throw std::invalid_argument("imaginary quadratic field needs a negative radicand");
    return of_squarefree(arith::squarefree_part_signed(n, budget).d);
}

Discriminant Discriminant::of_squarefree(Int const & d)
{
    if (sgn(d) >= 0)
        throw std::invalid_argument("imaginary quadratic field needs a negative radicand");
    if (mpz_fdiv_ui(d.get_mpz_t(), 4) == 1)
        return Discriminant(d, true);
    return Discriminant(Int(4 * d), true);
}

std::ostream & operator<<(std::ostream & os, Discriminant const & D)
{
    return os << D.value();
}

bool QuadForm::is_primitive() const
{
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g == 1;
}

std::strong_ordering QuadForm::operator<=>(QuadForm const & o) const
{
    if (int s = cmp(a, o.a))
        return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (int s = cmp(b, o.b))
        return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (int s = cmp(c, o.c))
        return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream & operator<<(std::ostream & os, QuadForm const & f)
{
    return os << "(" << f.a << ", " << f.b << ", " << f.c << ")";
}

std::size_t QuadFormHash::operator()(QuadForm const & f) const noexcept
{
    std::size_t h = mpz_get_ui(f.a.get_mpz_t());
    h = h * 0x9e3779b97f4a7c15ULL ^ mpz_get_ui(f.b.get_mpz_t()) ^ (sgn(f.b) < 0 ? 0x5bd1e995ULL : 0);
    h = h * 0x9e3779b97f4a7c15ULL ^ mpz_get_ui(f.c.get_mpz_t());
    return h;
}

bool is_reduced(QuadForm const & f)
{
    if (sgn(f.a) <= 0 || sgn(f.c) <= 0)
        return false;
    if (abs(f.b) > f.a || f.a > f.c)
        return false;
    if ((abs(f.b) == f.a || f.a == f.c) && sgn(f.b) < 0)
        return false;
    return true;
}

QuadForm reduce(QuadForm f)
{
    if (sgn(f.a) <= 0 || sgn(f.discriminant()) >= 0)
        throw std::invalid_argument("reduce: positive definite form required");
    normalize(f);
    while (f.a > f.c) {
        swap(f.a, f.c);
        f.b = -f.b;
        normalize(f);
    }
    if (f.a == f.c && sgn(f.b) < 0)
        f.b = -f.b;
    return f;
}

QuadForm identity_form(Discriminant const & D)
{
    return principal_form(D.value());
}

QuadForm compose(QuadForm const & f, QuadForm const & g)
{
    // Dirichlet composition: with s = (b1 + b2)/2 and
    // d = gcd(a1, a2, s) = u a1 + v a2 + w s, the product is
    // (a1 a2 / d^2, b2 + 2 (a2/d) (v (s - b2) - w c2), *).
    Int s = (f.b + g.b) / 2;
    Int gg, u0, v0, d, v1, w;
    mpz_gcdext(gg.get_mpz_t(), u0.get_mpz_t(), v0.get_mpz_t(), f.a.get_mpz_t(), g.a.get_mpz_t());
    mpz_gcdext(d.get_mpz_t(), v1.get_mpz_t(), w.get_mpz_t(), gg.get_mpz_t(), s.get_mpz_t());
    Int v = v0 * v1;
    Int a2d = g.a / d;
    QuadForm r;
    r.a = f.a * a2d / d;
    r.b = g.b + 2 * a2d * ((s - g.b) * v - w * g.c);
    Int disc = f.discriminant();
    r.c = (r.b * r.b - disc) / (4 * r.a);
    return reduce(std::move(r));
}

QuadForm square(QuadForm const & f)
{
    Int d, u, v;
    mpz_gcdext(d.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), f.a.get_mpz_t(), f.b.get_mpz_t());
    Int a_d = f.a / d;
    QuadForm r;
    r.a = a_d * a_d;
    r.b = f.b - 2 * v * f.c * a_d;
    Int disc = f.discriminant();
    r.c = (r.b * r.b - disc) / (4 * r.a);
    return reduce(std::move(r));
}

QuadForm inverse(QuadForm const & f)
{
    return reduce({f.a, Int(-f.b), f.c});
}

QuadForm form_pow(QuadForm const & f, Int const & e)
{
    if (sgn(e) < 0)
        return form_pow(inverse(f), Int(-e));
    QuadForm base = reduce(f);
    QuadForm one = principal_form(base.discriminant());
    if (e == 0)
        return one;
    QuadForm r = base;
    for (std::size_t i = mpz_sizeinbase(e.get_mpz_t(), 2) - 1; i-- > 0;) {
        r = square(r);
        if (mpz_tstbit(e.get_mpz_t(), i))
            r = compose(r, base);
    }
    return r;
}

std::uint64_t element_order(QuadForm const & f, std::uint64_t class_number)
{
    QuadForm one = principal_form(f.discriminant());
    std::uint64_t order = class_number;
    auto fac = arith::factor(arith::from_u64(class_number));
    for (auto const & pe : fac.factors) {
        std::uint64_t ell = arith::to_u64(pe.prime);
        while (order % ell == 0 && form_pow(f, arith::from_u64(order / ell)) == one)
            order /= ell;
    }
    if (form_pow(f, arith::from_u64(order)) != one)
        throw std::logic_error("element order does not divide the class number");
    return order;
}

std::uint64_t element_order(QuadForm const & f, Limits const & limits)
{
    Discriminant D(f.discriminant(), limits.budget);
    return element_order(f, class_number(D, limits));
}

std::optional<QuadForm> prime_form(Discriminant const & D, Int const & ell)
{
    Int const & v = D.value();
    if (arith::kronecker(v, ell) == -1)
        return std::nullopt;
    Int b;
    if (ell == 2) {
        unsigned long dm = mpz_fdiv_ui(v.get_mpz_t(), 8);
        b = -1;
        for (unsigned long cand = 0; cand < 4; ++cand)
            if ((cand * cand) % 8 == dm) {
                b = cand;
                break;
            }
        if (b < 0)
            return std::nullopt;
    } else {
        auto roots = arith::sqrt_mod_prime_power(v, ell, 1);
        if (roots.empty())
            return std::nullopt;
        b = roots.front();
        if (mpz_odd_p(b.get_mpz_t()) != mpz_odd_p(v.get_mpz_t()))
            b += ell;
    }
    QuadForm f{ell, b, Int((b * b - v) / (4 * ell))};
    if (!f.is_primitive())
        return std::nullopt;
    return reduce(f);
}

NormSearch forms_of_norm(Discriminant const & D, Int const & n, arith::FactorBudget const & budget)
{
    if (sgn(n) <= 0)
        throw std::invalid_argument("forms_of_norm: n must be positive");
    NormSearch out;
    std::set<QuadForm> seen;
    Int four_n = 4 * n;
    for (Int const & B : arith::sqrt_mod(D.value(), four_n, budget)) {
        QuadForm f{n, B, Int((B * B - D.value()) / four_n)};
        if (!f.is_primitive()) {
            out.nonprimitive.push_back(f);
            continue;
        }
        seen.insert(reduce(f));
    }
    out.forms.assign(seen.begin(), seen.end());
    return out;
}

namespace {

struct SylowPart
{
    std::uint64_t prime;
    /* Cyclic factor orders (powers of prime), descending, with generators. */
    std::vector<std::uint64_t> orders;
    std::vector<QuadForm> gens;
};

std::uint64_t ipow(std::uint64_t b, unsigned e)
{
    std::uint64_t r = 1;
    while (e--)
        r *= b;
    return r;
}

/* Deterministic stream of class group elements: prime forms for
 * ell = 2, 3, 5, ... (prime forms generate the class group). */
class PrimeFormStream
{
  public:
    explicit PrimeFormStream(Discriminant const & D)
        : D_(D)
    {
    }

    QuadForm next()
    {
        for (;;) {
            mpz_nextprime(ell_.get_mpz_t(), ell_.get_mpz_t());
            if (auto f = prime_form(D_, ell_))
                return *f;
        }
    }

  private:
    Discriminant const & D_;
    Int ell_ = 1;
};

unsigned order_exponent(QuadForm x, std::uint64_t ell, QuadForm const & one)
{
    unsigned j = 0;
    Int e = arith::from_u64(ell);
    while (x != one) {
        x = form_pow(x, e);
        ++j;
    }
    return j;
}

/* Structure of the ell-Sylow subgroup of order ell^e. */
SylowPart sylow_structure(Discriminant const & D, std::uint64_t h, std::uint64_t ell, unsigned e,
                          QuadForm const & one)
{
    SylowPart part{ell, {}, {}};
    std::uint64_t size = ipow(ell, e);
    Int cof = arith::from_u64(h / size);
    PrimeFormStream stream(D);
    Int ell_z = arith::from_u64(ell);

    std::vector<QuadForm> pool;
    for (int tries = 0; tries < 8; ++tries) {
        QuadForm x = form_pow(stream.next(), cof);
        if (order_exponent(x, ell, one) == e) {
            part.orders.push_back(size);
            part.gens.push_back(x);
            return part;
        }
        pool.push_back(std::move(x));
    }

    // Non-cyclic (or unlucky): enumerate the Sylow subgroup generated by
    // the pool, growing the pool until it reaches ell^e elements.
    std::vector<QuadForm> span{one};
    std::unordered_map<QuadForm, int, QuadFormHash> in_span{{one, 0}};
    std::vector<QuadForm> used;
    auto absorb = [&](QuadForm const & x) {
        if (in_span.count(x))
            return;
        used.push_back(x);
        std::vector<QuadForm> layer = span;
        std::vector<QuadForm> added;
        for (;;) {
            for (auto & y : layer)
                y = compose(y, x);
            if (in_span.count(layer.front()))
                break;
            for (auto const & y : layer) {
                in_span.emplace(y, 0);
                added.push_back(y);
            }
        }
        span.insert(span.end(), added.begin(), added.end());
    };
    std::size_t next = 0;
    while (span.size() < size) {
        if (next == pool.size())
            pool.push_back(form_pow(stream.next(), cof));
        absorb(pool[next++]);
    }

    // Greedy basis: repeatedly take the generator of largest order modulo
    // the current subgroup H and correct it into a complement.
    std::unordered_map<QuadForm, std::vector<std::uint64_t>, QuadFormHash> dlog{{one, {}}};
    std::uint64_t h_size = 1;
    while (h_size < size) {
        unsigned best = 0;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < used.size(); ++i) {
            unsigned a = 0;
            QuadForm y = used[i];
            while (!dlog.count(y)) {
                y = form_pow(y, ell_z);
                ++a;
            }
            if (a > best) {
                best = a;
                best_i = i;
            }
        }
        std::uint64_t ord = ipow(ell, best);
        QuadForm x = used[best_i];
        auto const & coeffs = dlog.at(form_pow(x, arith::from_u64(ord)));
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j] % ord != 0)
                throw std::logic_error("class group basis correction failed");
            Int t = arith::from_u64(coeffs[j] / ord);
            x = compose(x, inverse(form_pow(part.gens[j], t)));
        }
        // extend H by <x>
        std::vector<std::pair<QuadForm, std::vector<std::uint64_t>>> fresh;
        for (auto const & [y, vec] : dlog) {
            QuadForm z = y;
            for (std::uint64_t t = 1; t < ord; ++t) {
                z = compose(z, x);
                auto v = vec;
                v.resize(part.gens.size() + 1, 0);
                v.back() = t;
                fresh.emplace_back(z, std::move(v));
            }
        }
        for (auto & [y, vec] : dlog)
            vec.resize(part.gens.size() + 1, 0);
        for (auto & [y, vec] : fresh)
            dlog.emplace(std::move(y), std::move(vec));
        part.orders.push_back(ord);
        part.gens.push_back(x);
        h_size *= ord;
    }
    return part;
}

} // namespace

ClassGroupStructure class_group_structure(Discriminant const & D, Limits const & limits)
{
    std::uint64_t h = class_number(D, limits);
    if (h > limits.struct_bound)
        throw BoundExceeded("class number " + std::to_string(h) + " above structure bound " +
                            std::to_string(limits.struct_bound));
    ClassGroupStructure out{D, h, {}, {}};
    QuadForm one = identity_form(D);
    if (h == 1)
        return out;

    std::vector<SylowPart> parts;
    for (auto const & pe : arith::factor(arith::from_u64(h)).factors)
        parts.push_back(sylow_structure(D, h, arith::to_u64(pe.prime), pe.exponent, one));

    std::size_t rank = 0;
    for (auto const & p : parts)
        rank = std::max(rank, p.orders.size());
    // i-th largest invariant factor collects the i-th largest cyclic
    // factor of each Sylow subgroup.
    for (std::size_t i = 0; i < rank; ++i) {
        std::uint64_t d = 1;
        QuadForm g = one;
        for (auto const & p : parts) {
            if (i < p.orders.size()) {
                d *= p.orders[i];
                g = compose(g, p.gens[i]);
            }
        }
        out.elementary_divisors.push_back(d);
        out.generators.push_back(g);
    }
    std::reverse(out.elementary_divisors.begin(), out.elementary_divisors.end());
    std::reverse(out.generators.begin(), out.generators.end());

    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < out.generators.size(); ++i) {
        prod *= out.elementary_divisors[i];
        if (element_order(out.generators[i], h) != out.elementary_divisors[i])
            throw std::logic_error("class group generator has the wrong order");
    }
    if (prod != h)
        throw std::logic_error("elementary divisors do not multiply to the class number");
    return out;
}

} // namespace quadclass::qform
