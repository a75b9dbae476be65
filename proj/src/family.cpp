#include "quadclass/family.hpp"

#include <stdexcept>

#include "quadclass/error.hpp"

namespace quadclass::family {

namespace {

Int pow_ui(Int const & b, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

bool small_prime(unsigned long n)
{
    return arith::is_prime(Int(n));
}

/* Fills class_number and divisible; bound problems become skips. */
void evaluate(FieldInfo & f, qform::Limits const & limits)
{
    if (f.skipped_reason || !f.disc)
        return;
    try {
        f.class_number = qform::class_number(*f.disc, limits);
        f.divisible = *f.class_number % f.divisor == 0;
    } catch (BoundExceeded const & e) {
        f.skipped_reason = std::string("bound: ") + e.what();
    }
}

FieldInfo describe(Int const & radicand, std::uint64_t divisor, qform::Limits const & limits)
{
    FieldInfo f;
    f.radicand = radicand;
    f.divisor = divisor;
    try {
        auto sq = arith::squarefree_part_signed(radicand, limits.budget);
        f.d = sq.d;
        f.s = sq.s;
    } catch (EffortExceeded const & e) {
        f.skipped_reason = std::string("effort: ") + e.what();
        return f;
    }
    if (f.d == -1)
        return f;
    f.disc = qform::Discriminant::of_squarefree(f.d);
    return f;
}

/* (x + y sqrt(d)) (u + v sqrt(d)) */
std::pair<Int, Int> mul(Int const & x, Int const & y, Int const & u, Int const & v, Int const & d)
{
    return {x * u + d * y * v, x * v + y * u};
}

} // namespace

FamilyParams FamilyParams::make(unsigned long p, unsigned long q, unsigned long r)
{
    if (p < 3 || !small_prime(p))
        throw std::invalid_argument("p must be an odd prime, got " + std::to_string(p));
    if (q < 3 || !small_prime(q))
        throw std::invalid_argument("q must be an odd prime, got " + std::to_string(q));
    if (r < 1)
        throw std::invalid_argument("r must be positive");
    return {p, q, r};
}

Int FamilyParams::m() const
{
    return pow_ui(Int(q), r);
}

Int FamilyParams::radicand() const
{
    return 1 - 2 * pow_ui(m(), p);
}

FieldRecord base_field(FamilyParams const & params, qform::Limits const & limits)
{
    FieldRecord rec{params, describe(params.radicand(), params.p, limits)};
    if (rec.field.skipped_reason)
        return rec;
    if (rec.field.d == -1)
        throw QiExcluded("Q(sqrt(1 - 2 m^p)) = Q(i) for p=" + std::to_string(params.p) +
                         " q=" + std::to_string(params.q) + " r=" + std::to_string(params.r));
    if (mpz_fdiv_ui(rec.field.d.get_mpz_t(), 4) != 3)
        throw std::logic_error("squarefree part of 1 - 2 m^p is not 3 mod 4: " + rec.field.d.get_str());
    return rec;
}

FieldRecord verify_thm1(FamilyParams const & params, qform::Limits const & limits)
{
    FieldRecord rec = base_field(params, limits);
    evaluate(rec.field, limits);
    return rec;
}

PairRecord pair(FamilyParams const & params, qform::Limits const & limits)
{
    Int radicand = params.radicand();
    PairRecord rec{params, 4 * pow_ui(radicand, params.p), 2 * pow_ui(params.m(), params.p) - 1, {}, {}, {}};
    if (rec.d_pair + 1 != 1 - 4 * pow_ui(rec.U, params.p))
        throw std::logic_error("d + 1 != 1 - 4 U^p");

    // 4 t^p = t (2 t^((p-1)/2))^2, so Q(sqrt(d_pair)) = Q(sqrt(t)).
    FieldInfo base = describe(radicand, params.p, limits);
    rec.left = base;
    rec.left.radicand = rec.d_pair;
    if (!base.skipped_reason)
        rec.left.s = base.s * 2 * abs(pow_ui(radicand, (params.p - 1) / 2));
    rec.right = describe(rec.d_pair + 1, params.p, limits);
    if (rec.left.d == -1 && !rec.left.skipped_reason)
        rec.left.skipped_reason = "excluded: Q(i)";
    if (rec.right.d == -1 && !rec.right.skipped_reason)
        rec.right.skipped_reason = "excluded: Q(i)";
    return rec;
}

PairRecord verify_thm2_pair(FamilyParams const & params, qform::Limits const & limits)
{
    PairRecord rec = pair(params, limits);
    evaluate(rec.left, limits);
    evaluate(rec.right, limits);
    if (rec.left.divisible && rec.right.divisible)
        rec.both_divisible = *rec.left.divisible && *rec.right.divisible;
    return rec;
}

LouboutinRecord louboutin_field(Int const & U, unsigned long k, qform::Limits const & limits)
{
    if (U < 2)
        throw std::invalid_argument("louboutin_field: U must be at least 2");
    if (k < 3 || k % 2 == 0)
        throw std::invalid_argument("louboutin_field: k must be odd and at least 3");
    LouboutinRecord rec{U, k, describe(1 - 4 * pow_ui(U, k), k, limits)};
    if (rec.field.d == -1 && !rec.field.skipped_reason)
        rec.field.skipped_reason = "excluded: Q(i)";
    evaluate(rec.field, limits);
    return rec;
}

std::optional<QuadInteger> find_pth_root(Int const & d, QuadInteger const & target, unsigned long p,
                                         Int const & norm, std::size_t * examined)
{
    if (sgn(d) >= 0)
        throw std::invalid_argument("find_pth_root: d must be negative");
    // O_K = Z[(1 + sqrt d)/2] when d = 1 mod 4; write beta = (a + b sqrt d)/2
    // with a = b mod 2 and search a^2 + |d| b^2 = 4 norm. Otherwise
    // O_K = Z[sqrt d] and a^2 + |d| b^2 = norm.
    bool half = mpz_fdiv_ui(d.get_mpz_t(), 4) == 1;
    unsigned den = half ? 2 : 1;
    Int abs_d = -d;
    Int n = half ? Int(4 * norm) : norm;
    // beta^p = (x + y sqrt d) / den^p; compare with target scaled to den^p.
    Int scale = pow_ui(Int(den), p);
    Int tx = target.x * scale / target.denominator;
    Int ty = target.y * scale / target.denominator;
    std::size_t seen = 0;
    std::optional<QuadInteger> found;
    for (Int b = 0; abs_d * b * b <= n; ++b) {
        auto a = arith::perfect_square_root(n - abs_d * b * b);
        if (!a)
            continue;
        for (int sa : {1, -1}) {
            for (int sb : {1, -1}) {
                if ((sa < 0 && *a == 0) || (sb < 0 && b == 0))
                    continue;
                Int x = sa * *a, y = sb * b;
                if (half && mpz_odd_p(x.get_mpz_t()) != mpz_odd_p(y.get_mpz_t()))
                    continue;
                ++seen;
                Int px = 1, py = 0;
                for (unsigned long i = 0; i < p; ++i)
                    std::tie(px, py) = mul(px, py, x, y, d);
                if ((px == tx && py == ty) || (px == -tx && py == -ty))
                    if (!found)
                        found = QuadInteger{x, y, den};
            }
        }
    }
    if (examined)
        *examined = seen;
    return found;
}

PthPowerVerdict check_pth_power(FamilyParams const & params, arith::FactorBudget const & budget)
{
    PthPowerVerdict v;
    Int radicand = params.radicand();
    arith::SquarefreePart sq;
    try {
        sq = arith::squarefree_part_signed(radicand, budget);
    } catch (EffortExceeded const & e) {
        v.reason = std::string("effort: ") + e.what();
        return v;
    }
    if (sq.d >= -1) {
        v.reason = "excluded: d = " + sq.d.get_str();
        return v;
    }
    Int m = params.m();
    // 2^((p-1)/2) (1 + s sqrt d), with radicand = d s^2
    Int two_pow = pow_ui(Int(2), (params.p - 1) / 2);
    QuadInteger target{two_pow, two_pow * sq.s, 1};
    auto w = find_pth_root(sq.d, target, params.p, 2 * m, &v.candidates);

    Int abs_d = -sq.d;
    Int rhs = 2 * m - 1;
    if (rhs % abs_d == 0)
        if (auto b = arith::perfect_square_root(rhs / abs_d); b && *b > 0)
            v.norm_equation_solutions.push_back(*b);

    if (w) {
        v.kind = PthPowerVerdict::Kind::IsPthPower;
        v.witness = w;
    } else {
        v.kind = PthPowerVerdict::Kind::NotPthPower;
    }
    return v;
}

WitnessResult witness_order_p(FamilyParams const & params, qform::Limits const & limits)
{
    FieldRecord rec = base_field(params, limits);
    if (rec.field.skipped_reason)
        throw EffortExceeded(*rec.field.skipped_reason);
    qform::Discriminant const & D = *rec.field.disc;
    WitnessResult out;
    out.class_number = qform::class_number(D, limits);
    if (out.class_number > limits.struct_bound)
        throw BoundExceeded("class number " + std::to_string(out.class_number) +
                            " above structure bound " + std::to_string(limits.struct_bound));
    out.candidates = qform::forms_of_norm(D, 2 * params.m(), limits.budget).forms;
    for (auto const & f : out.candidates) {
        std::uint64_t ord = qform::element_order(f, out.class_number);
        out.candidate_orders.push_back(ord);
        if (ord == params.p && !out.witness)
            out.witness = f;
    }
    return out;
}

SetScan generate_S(unsigned long p, unsigned long q_max, unsigned long r_max, qform::Limits const & limits)
{
    SetScan out;
    for (unsigned long q = 3; q <= q_max; q += 2) {
        if (!small_prime(q))
            continue;
        for (unsigned long r = 1; r <= r_max; ++r) {
            auto params = FamilyParams::make(p, q, r);
            FieldRecord rec{params, {}};
            try {
                rec = verify_thm1(params, limits);
            } catch (QiExcluded const & e) {
                rec.field.skipped_reason = std::string("excluded: ") + e.what();
            }
            if (!rec.field.divisible)
                out.skipped.push_back(std::move(rec));
            else if (*rec.field.divisible)
                out.admitted.push_back(params);
            else
                out.rejected.push_back(std::move(rec));
        }
    }
    return out;
}

} // namespace quadclass::family
