#include "quadclass/cli.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "quadclass/error.hpp"
#include "quadclass/parallel.hpp"

namespace quadclass::cli {

using report::Cell;
using report::CellKind;
using report::Column;

namespace {

enum class Status { Ok, RedFlag, Skipped };

struct Row
{
    std::vector<Cell> cells;
    Status status = Status::Ok;
};

template <class T>
std::string str(T const & x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

Cell text(Int const & v)
{
    return v.get_str();
}

Cell integer(std::uint64_t v)
{
    return static_cast<std::int64_t>(v);
}

template <class T>
Cell maybe(std::optional<T> const & v)
{
    if (!v)
        return std::monostate{};
    if constexpr (std::is_same_v<T, bool>)
        return *v;
    else if constexpr (std::is_integral_v<T>)
        return static_cast<std::int64_t>(*v);
    else
        return str(*v);
}

std::string join(std::vector<std::string> const & parts, char const * sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? sep : "") + parts[i];
    return out;
}

/* Limits for one task of a sweep: when the sweep itself runs on several
 * workers, the class-number loop inside each task stays single threaded. */
qform::Limits task_limits(RunConfig const & cfg)
{
    qform::Limits l = cfg.limits;
    if (cfg.workers > 1)
        l.threads = 1;
    return l;
}

int exit_code_for(std::vector<Row> const & rows)
{
    bool skip = false;
    for (auto const & r : rows) {
        if (r.status == Status::RedFlag)
            return exit_red_flag;
        skip |= r.status == Status::Skipped;
    }
    return skip ? exit_skips : exit_ok;
}

CommandResult finish(std::vector<Column> columns, std::vector<Row> rows)
{
    CommandResult res;
    res.table.columns = std::move(columns);
    res.exit_code = exit_code_for(rows);
    for (auto & r : rows)
        res.table.rows.push_back(std::move(r.cells));
    return res;
}

void tick(RunConfig const & cfg, std::string const & what)
{
    if (cfg.progress)
        cfg.progress(what);
}

void sort_unique(std::vector<unsigned long> & v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<family::FamilyParams> grid(std::vector<unsigned long> ps, std::vector<unsigned long> qs,
                                       unsigned long r_max)
{
    sort_unique(ps);
    sort_unique(qs);
    std::vector<family::FamilyParams> out;
    for (auto p : ps)
        for (auto q : qs)
            for (unsigned long r = 1; r <= r_max; ++r)
                out.push_back(family::FamilyParams::make(p, q, r));
    return out;
}

std::string params_label(family::FamilyParams const & p)
{
    return "p=" + std::to_string(p.p) + " q=" + std::to_string(p.q) + " r=" + std::to_string(p.r);
}

unsigned long parse_ul(std::string_view s)
{
    unsigned long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not a non-negative integer: '" + std::string(s) + "'");
    return v;
}

std::string solutions_text(std::vector<dioph::Solution> const & sols)
{
    std::vector<std::string> parts;
    for (auto const & s : sols)
        parts.push_back("(" + s.x.get_str() + "," + std::to_string(s.y) + ")");
    return join(parts, " ");
}

} // namespace

void RunConfig::validate() const
{
    if (workers < 1)
        throw std::invalid_argument("worker count must be at least 1");
    if (limits.enum_bound < 1 || limits.struct_bound < 1)
        throw std::invalid_argument("bounds must be positive");
    if (limits.budget.trial_bound < 1 || limits.budget.rho_iterations < 1)
        throw std::invalid_argument("effort budget must be positive");
    if (y_max < 1)
        throw std::invalid_argument("ymax must be positive");
}

std::pair<unsigned long, unsigned long> parse_range(std::string_view text)
{
    auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        unsigned long v = parse_ul(text);
        return {v, v};
    }
    unsigned long lo = parse_ul(text.substr(0, dots)), hi = parse_ul(text.substr(dots + 2));
    if (lo > hi)
        throw std::invalid_argument("empty range '" + std::string(text) + "'");
    return {lo, hi};
}

namespace {

std::vector<unsigned long> parse_items(std::string_view text, bool primes)
{
    std::vector<unsigned long> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (item.empty())
            continue;
        bool is_range = item.find("..") != std::string_view::npos;
        auto [lo, hi] = parse_range(item);
        for (unsigned long v = lo; v <= hi; ++v) {
            if (primes && !arith::is_prime(Int(v))) {
                if (!is_range)
                    throw std::invalid_argument(std::to_string(v) + " is not prime");
                continue;
            }
            out.push_back(v);
        }
    }
    return out;
}

} // namespace

std::vector<unsigned long> parse_list(std::string_view text)
{
    return parse_items(text, false);
}

std::vector<unsigned long> parse_prime_list(std::string_view text)
{
    return parse_items(text, true);
}

// ---- schemas

std::vector<Column> classnum_columns()
{
    return {{"input", CellKind::Text},   {"d", CellKind::Text},     {"disc", CellKind::Text},
            {"fundamental", CellKind::Bool}, {"h", CellKind::Integer}, {"forms", CellKind::Text},
            {"skipped_reason", CellKind::Text}};
}

std::vector<Column> classgroup_columns()
{
    return {{"disc", CellKind::Text},        {"h", CellKind::Integer},
            {"invariants", CellKind::Text},  {"generators", CellKind::Text},
            {"skipped_reason", CellKind::Text}};
}

std::vector<Column> thm1_columns()
{
    return {{"p", CellKind::Integer},         {"q", CellKind::Integer},
            {"r", CellKind::Integer},         {"m", CellKind::Text},
            {"radicand", CellKind::Text},     {"d", CellKind::Text},
            {"disc", CellKind::Text},         {"h", CellKind::Integer},
            {"p_divides", CellKind::Bool},    {"witness", CellKind::Text},
            {"witness_order", CellKind::Integer}, {"pth_power", CellKind::Text},
            {"notes", CellKind::Text},        {"skipped_reason", CellKind::Text}};
}

std::vector<Column> pairs_columns()
{
    return {{"p", CellKind::Integer},          {"q", CellKind::Integer},
            {"r", CellKind::Integer},          {"m", CellKind::Text},
            {"U", CellKind::Text},             {"left_radicand", CellKind::Text},
            {"left_disc", CellKind::Text},     {"left_h", CellKind::Integer},
            {"left_divisible", CellKind::Bool}, {"right_radicand", CellKind::Text},
            {"right_disc", CellKind::Text},    {"right_h", CellKind::Integer},
            {"right_divisible", CellKind::Bool}, {"both_divisible", CellKind::Bool},
            {"skipped_reason", CellKind::Text}};
}

std::vector<Column> louboutin_columns()
{
    return {{"U", CellKind::Integer},        {"k", CellKind::Integer},  {"radicand", CellKind::Text},
            {"d", CellKind::Text},           {"disc", CellKind::Text},  {"h", CellKind::Integer},
            {"k_divides", CellKind::Bool},   {"skipped_reason", CellKind::Text}};
}

std::vector<Column> dioph_columns()
{
    return {{"lambda2", CellKind::Integer}, {"D1", CellKind::Text}, {"D2", CellKind::Text},
            {"k", CellKind::Text},          {"x", CellKind::Text},  {"y", CellKind::Integer}};
}

std::vector<Column> lemma23_columns()
{
    return {{"D", CellKind::Integer},     {"q", CellKind::Integer},    {"count", CellKind::Integer},
            {"solutions", CellKind::Text}, {"violation", CellKind::Bool}};
}

std::vector<Column> families_columns()
{
    return {{"lambda2", CellKind::Integer}, {"D1", CellKind::Integer},  {"D2", CellKind::Integer},
            {"k", CellKind::Integer},       {"count", CellKind::Integer}, {"solutions", CellKind::Text},
            {"family", CellKind::Text},     {"explained", CellKind::Bool}};
}

std::vector<Column> scan_s_columns()
{
    return {{"p", CellKind::Integer}, {"q", CellKind::Integer},   {"r", CellKind::Integer},
            {"m", CellKind::Text},    {"status", CellKind::Text}, {"h", CellKind::Integer},
            {"reason", CellKind::Text}};
}

std::vector<Column> siegel_columns()
{
    return {{"d0", CellKind::Text}, {"p", CellKind::Integer}, {"x", CellKind::Text}, {"y", CellKind::Text}};
}

std::vector<Column> crosscheck_columns()
{
    return {{"disc", CellKind::Text},       {"local_h", CellKind::Integer}, {"remote_h", CellKind::Integer},
            {"verdict", CellKind::Text},    {"detail", CellKind::Text}};
}

// ---- class numbers

CommandResult classnum(Int const & value, bool is_disc, bool list, RunConfig const & cfg)
{
    cfg.validate();
    Row row;
    std::optional<qform::Discriminant> D;
    std::optional<Int> d;
    if (is_disc) {
        D = qform::Discriminant(value, cfg.limits.budget);
    } else {
        if (sgn(value) >= 0)
            throw std::invalid_argument("classnum: only imaginary fields (negative radicand) are supported");
        auto sq = arith::squarefree_part_signed(value, cfg.limits.budget);
        d = sq.d;
        D = qform::Discriminant::of_squarefree(sq.d);
    }
    std::optional<std::uint64_t> h;
    std::optional<std::string> forms, reason;
    try {
        h = qform::class_number(*D, cfg.limits);
        if (list) {
            std::vector<std::string> parts;
            for (auto const & f : qform::reduced_forms(*D, cfg.limits))
                parts.push_back(str(f));
            forms = join(parts, " ");
        }
    } catch (BoundExceeded const & e) {
        reason = std::string("bound: ") + e.what();
        row.status = Status::Skipped;
    }
    row.cells = {text(value), d ? text(*d) : Cell{}, text(D->value()), D->is_fundamental(), maybe(h),
                 maybe(forms), maybe(reason)};
    std::vector<Row> rows;
    rows.push_back(std::move(row));
    return finish(classnum_columns(), std::move(rows));
}

CommandResult classgroup(Int const & value, bool is_disc, RunConfig const & cfg)
{
    cfg.validate();
    qform::Discriminant D = is_disc ? qform::Discriminant(value, cfg.limits.budget)
                                    : qform::Discriminant::of_field(value, cfg.limits.budget);
    Row row;
    try {
        auto cg = qform::class_group_structure(D, cfg.limits);
        std::vector<std::string> inv, gens;
        for (auto e : cg.elementary_divisors)
            inv.push_back(std::to_string(e));
        for (auto const & g : cg.generators)
            gens.push_back(str(g));
        row.cells = {text(D.value()), integer(cg.class_number), "[" + join(inv, ", ") + "]", join(gens, " "),
                     Cell{}};
    } catch (BoundExceeded const & e) {
        row.cells = {text(D.value()), Cell{}, Cell{}, Cell{}, std::string("bound: ") + e.what()};
        row.status = Status::Skipped;
    }
    std::vector<Row> rows;
    rows.push_back(std::move(row));
    return finish(classgroup_columns(), std::move(rows));
}

// ---- family sweeps

namespace {

Row thm1_row(family::FamilyParams const & params, qform::Limits const & limits)
{
    Row row;
    family::FieldRecord rec{params, {}};
    std::optional<std::string> reason;
    try {
        rec = family::verify_thm1(params, limits);
        reason = rec.field.skipped_reason;
    } catch (QiExcluded const & e) {
        reason = std::string("excluded: ") + e.what();
    }
    auto const & f = rec.field;
    std::optional<std::string> witness, pth;
    std::optional<std::uint64_t> witness_order;
    std::vector<std::string> notes;

    if (f.divisible) {
        if (!*f.divisible) {
            row.status = Status::RedFlag;
            notes.push_back("RED FLAG: p does not divide h");
        }
        auto v = family::check_pth_power(params, limits.budget);
        switch (v.kind) {
        case family::PthPowerVerdict::Kind::NotPthPower:
            pth = "not-pth-power";
            break;
        case family::PthPowerVerdict::Kind::IsPthPower:
            pth = "pth-power";
            row.status = Status::RedFlag;
            notes.push_back("RED FLAG: (" + v.witness->x.get_str() + " + " + v.witness->y.get_str() + " sqrt d)/" +
                            std::to_string(v.witness->denominator) + " is a pth root");
            break;
        case family::PthPowerVerdict::Kind::Skipped:
            notes.push_back("pth-power check skipped: " + v.reason.value_or("?"));
            break;
        }
        if (*f.class_number <= limits.struct_bound) {
            auto w = family::witness_order_p(params, limits);
            if (w.witness) {
                witness = str(*w.witness);
                witness_order = params.p;
            } else {
                row.status = Status::RedFlag;
                std::vector<std::string> cands;
                for (std::size_t i = 0; i < w.candidates.size(); ++i)
                    cands.push_back(str(w.candidates[i]) + " order " + std::to_string(w.candidate_orders[i]));
                notes.push_back("RED FLAG: no class of norm 2m has order p; candidates: " +
                                (cands.empty() ? std::string("none") : join(cands, ", ")));
            }
        } else {
            notes.push_back("witness not searched: h above structure bound");
        }
    } else {
        row.status = Status::Skipped;
    }

    row.cells = {
        integer(params.p),
        integer(params.q),
        integer(params.r),
        text(params.m()),
        text(params.radicand()),
        f.disc ? text(f.d) : Cell{},
        f.disc ? text(f.disc->value()) : Cell{},
        maybe(f.class_number),
        maybe(f.divisible),
        maybe(witness),
        maybe(witness_order),
        maybe(pth),
        notes.empty() ? Cell{} : Cell{join(notes, "; ")},
        maybe(reason),
    };
    return row;
}

void field_cells(family::FieldInfo const & f, std::vector<Cell> & out, bool with_d)
{
    out.push_back(text(f.radicand));
    if (with_d)
        out.push_back(f.d != 0 ? text(f.d) : Cell{});
    out.push_back(f.disc ? text(f.disc->value()) : Cell{});
    out.push_back(maybe(f.class_number));
    out.push_back(maybe(f.divisible));
}

} // namespace

CommandResult verify_thm1(std::vector<unsigned long> ps, std::vector<unsigned long> qs, unsigned long r_max,
                          RunConfig const & cfg)
{
    cfg.validate();
    auto params = grid(std::move(ps), std::move(qs), r_max);
    auto limits = task_limits(cfg);
    auto rows = parallel_map(params.size(), cfg.workers, [&](std::size_t i) {
        Row r = thm1_row(params[i], limits);
        tick(cfg, "verify-thm1 " + params_label(params[i]));
        return r;
    });
    return finish(thm1_columns(), std::move(rows));
}

CommandResult verify_pairs(std::vector<unsigned long> ps, std::vector<unsigned long> qs, unsigned long r_max,
                           RunConfig const & cfg)
{
    cfg.validate();
    auto params = grid(std::move(ps), std::move(qs), r_max);
    auto limits = task_limits(cfg);
    auto rows = parallel_map(params.size(), cfg.workers, [&](std::size_t i) {
        auto rec = family::verify_thm2_pair(params[i], limits);
        Row row;
        row.cells = {integer(rec.params.p), integer(rec.params.q), integer(rec.params.r), text(rec.params.m()),
                     text(rec.U)};
        rec.left.radicand = rec.d_pair;
        field_cells(rec.left, row.cells, false);
        field_cells(rec.right, row.cells, false);
        row.cells.push_back(maybe(rec.both_divisible));
        std::vector<std::string> reasons;
        if (rec.left.skipped_reason)
            reasons.push_back("left: " + *rec.left.skipped_reason);
        if (rec.right.skipped_reason)
            reasons.push_back("right: " + *rec.right.skipped_reason);
        row.cells.push_back(reasons.empty() ? Cell{} : Cell{join(reasons, "; ")});
        bool red = (rec.left.divisible && !*rec.left.divisible) || (rec.right.divisible && !*rec.right.divisible);
        row.status = red ? Status::RedFlag : rec.both_divisible ? Status::Ok : Status::Skipped;
        tick(cfg, "verify-pairs " + params_label(params[i]));
        return row;
    });
    return finish(pairs_columns(), std::move(rows));
}

CommandResult louboutin(unsigned long u_max, std::vector<unsigned long> ks, RunConfig const & cfg)
{
    cfg.validate();
    sort_unique(ks);
    std::vector<std::pair<unsigned long, unsigned long>> tasks;
    for (unsigned long U = 2; U <= u_max; ++U)
        for (auto k : ks)
            tasks.emplace_back(U, k);
    auto limits = task_limits(cfg);
    auto rows = parallel_map(tasks.size(), cfg.workers, [&](std::size_t i) {
        auto [U, k] = tasks[i];
        auto rec = family::louboutin_field(Int(U), k, limits);
        Row row;
        row.cells = {integer(U), integer(k)};
        field_cells(rec.field, row.cells, true);
        row.cells.push_back(maybe(rec.field.skipped_reason));
        if (!rec.field.divisible)
            row.status = Status::Skipped;
        else if (!*rec.field.divisible)
            row.status = Status::RedFlag;
        tick(cfg, "louboutin U=" + std::to_string(U) + " k=" + std::to_string(k));
        return row;
    });
    return finish(louboutin_columns(), std::move(rows));
}

CommandResult scan_s(unsigned long p, unsigned long q_max, unsigned long r_max, RunConfig const & cfg)
{
    cfg.validate();
    auto scan = family::generate_S(p, q_max, r_max, cfg.limits);
    struct Entry
    {
        family::FamilyParams params;
        std::string status;
        std::optional<std::uint64_t> h;
        std::optional<std::string> reason;
    };
    std::vector<Entry> entries;
    for (auto const & a : scan.admitted)
        entries.push_back({a, "admitted", {}, {}});
    for (auto const & r : scan.rejected)
        entries.push_back({r.params, "rejected", r.field.class_number, {}});
    for (auto const & s : scan.skipped)
        entries.push_back({s.params, "skipped", {}, s.field.skipped_reason});
    std::sort(entries.begin(), entries.end(), [](auto const & x, auto const & y) { return x.params < y.params; });

    std::vector<Row> rows;
    for (auto const & e : entries) {
        std::optional<std::uint64_t> h = e.h;
        if (e.status == "admitted")
            h = qform::class_number(qform::Discriminant::of_field(e.params.radicand(), cfg.limits.budget), cfg.limits);
        Row row;
        row.cells = {integer(e.params.p), integer(e.params.q), integer(e.params.r), text(e.params.m()),
                     e.status,            maybe(h),            maybe(e.reason)};
        row.status = e.status == "admitted" ? Status::Ok : e.status == "rejected" ? Status::RedFlag : Status::Skipped;
        rows.push_back(std::move(row));
    }
    return finish(scan_s_columns(), std::move(rows));
}

// ---- Diophantine

CommandResult dioph(dioph::DiophInstance const & inst, RunConfig const & cfg)
{
    cfg.validate();
    auto sols = dioph::solve_bounded(inst, cfg.y_max);
    std::vector<Row> rows;
    for (auto const & s : sols.solutions)
        rows.push_back({{integer(inst.lambda_sq), text(inst.D1), text(inst.D2), text(inst.k), text(s.x),
                         integer(s.y)}});
    CommandResult res = finish(dioph_columns(), std::move(rows));

    std::vector<std::string> fam;
    if (dioph::is_sporadic(inst.lambda_sq, inst.D1, inst.D2, inst.k))
        fam.push_back("sporadic");
    try {
        if (auto w = dioph::in_family_F(inst.D1, inst.D2, inst.k))
            fam.push_back("F (j=" + std::to_string(w->index) + ", eps=" + std::to_string(w->epsilon) + ")");
    } catch (CapExceeded const &) {
        res.notes.push_back("F-family scan hit the index cap");
    }
    if (auto r = dioph::in_family_G(inst.D1, inst.D2, inst.k))
        fam.push_back("G (r=" + std::to_string(*r) + ")");
    if (auto w = dioph::in_family_H(inst.D1, inst.D2, inst.k, inst.lambda_sq))
        fam.push_back("H (r=" + std::to_string(w->r) + ", s=" + w->s.get_str() + ")");
    res.notes.push_back(std::to_string(sols.solutions.size()) + " solution(s) with y <= " +
                        std::to_string(cfg.y_max));
    res.notes.push_back("families: " + (fam.empty() ? std::string("none") : join(fam, ", ")));
    return res;
}

CommandResult lemma23(unsigned long d_lo, unsigned long d_hi, std::vector<unsigned long> qs, RunConfig const & cfg)
{
    cfg.validate();
    sort_unique(qs);
    for (auto q : qs)
        if (q < 3 || !arith::is_prime(Int(q)))
            throw std::invalid_argument("lemma23: q = " + std::to_string(q) + " is not an odd prime");
    std::vector<unsigned long> Ds;
    for (unsigned long D = std::max(d_lo, 4UL); D <= d_hi; ++D)
        Ds.push_back(D);
    auto per_d = parallel_map(Ds.size(), cfg.workers, [&](std::size_t i) {
        std::vector<Row> rows;
        unsigned long D = Ds[i];
        for (auto q : qs) {
            if (std::gcd(D, 2 * q) != 1)
                continue;
            auto sols = dioph::count_lemma23(Int(D), Int(q), cfg.y_max);
            if (sols.solutions.empty())
                continue;
            bool violation = sols.solutions.size() >= 2;
            rows.push_back({{integer(D), integer(q), integer(sols.solutions.size()), solutions_text(sols.solutions),
                             violation},
                            violation ? Status::RedFlag : Status::Ok});
        }
        return rows;
    });
    std::vector<Row> rows;
    for (auto & v : per_d)
        for (auto & r : v)
            rows.push_back(std::move(r));
    auto res = finish(lemma23_columns(), std::move(rows));
    std::size_t bad = std::count_if(res.table.rows.begin(), res.table.rows.end(),
                                    [](auto const & r) { return std::get<bool>(r[4]); });
    res.notes.push_back(std::to_string(bad) + " violation(s)");
    return res;
}

CommandResult families(std::vector<unsigned> lambdas, unsigned long d1_max, unsigned long d2_max,
                       std::vector<unsigned long> ks, dioph::FibonacciShift shift, RunConfig const & cfg)
{
    cfg.validate();
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    sort_unique(ks);
    std::vector<std::pair<unsigned, unsigned long>> tasks;   // (lambda^2, D1)
    for (auto l : lambdas)
        for (unsigned long d1 = 1; d1 <= d1_max; ++d1)
            tasks.emplace_back(l, d1);
    auto per_task = parallel_map(tasks.size(), cfg.workers, [&](std::size_t i) {
        auto [l, d1] = tasks[i];
        std::vector<Row> rows;
        for (unsigned long d2 = 1; d2 <= d2_max; ++d2) {
            if (std::gcd(d1, d2) != 1)
                continue;
            for (auto k : ks) {
                auto inst = dioph::DiophInstance::make(l, Int(d1), Int(d2), Int(k));
                auto sols = dioph::solve_bounded(inst, cfg.y_max);
                if (sols.solutions.size() < 2)
                    continue;
                std::vector<std::string> fam;
                if (dioph::is_sporadic(l, inst.D1, inst.D2, inst.k))
                    fam.push_back("sporadic");
                try {
                    if (dioph::in_family_F(inst.D1, inst.D2, inst.k, shift))
                        fam.push_back("F");
                } catch (CapExceeded const &) {
                    fam.push_back("F?cap");
                }
                if (dioph::in_family_G(inst.D1, inst.D2, inst.k))
                    fam.push_back("G");
                if (dioph::in_family_H(inst.D1, inst.D2, inst.k, l))
                    fam.push_back("H");
                bool explained = !fam.empty();
                rows.push_back({{integer(l), integer(d1), integer(d2), integer(k), integer(sols.solutions.size()),
                                 solutions_text(sols.solutions), fam.empty() ? Cell{} : Cell{join(fam, ",")},
                                 explained},
                                explained ? Status::Ok : Status::RedFlag});
            }
        }
        return rows;
    });
    std::vector<Row> rows;
    for (auto & v : per_task)
        for (auto & r : v)
            rows.push_back(std::move(r));
    auto res = finish(families_columns(), std::move(rows));
    std::size_t unexplained = std::count_if(res.table.rows.begin(), res.table.rows.end(),
                                            [](auto const & r) { return !std::get<bool>(r[7]); });
    res.notes.push_back(std::to_string(res.table.rows.size()) + " instance(s) with two or more solutions, " +
                        std::to_string(unexplained) + " outside the exceptional families");
    return res;
}

CommandResult siegel(Int const & d0, unsigned long p, Int const & x_max, RunConfig const & cfg)
{
    cfg.validate();
    std::vector<Row> rows;
    for (auto const & pt : dioph::siegel_scan(d0, p, x_max))
        rows.push_back({{text(d0), integer(p), text(pt.x), text(pt.y)}});
    auto res = finish(siegel_columns(), std::move(rows));
    res.notes.push_back(std::to_string(res.table.rows.size()) + " point(s) with 1 <= x <= " + x_max.get_str());
    return res;
}

CommandResult crosscheck(std::vector<Int> const & discs, dbcheck::Client & client, RunConfig const & cfg)
{
    cfg.validate();
    std::vector<Row> rows;
    for (auto const & v : discs) {
        qform::Discriminant D(v, cfg.limits.budget);
        auto c = client.crosscheck(D, cfg.limits);
        Row row;
        row.cells = {text(D.value()), integer(c.local), maybe(c.remote), dbcheck::to_string(c.verdict),
                     c.detail.empty() ? Cell{} : Cell{c.detail}};
        row.status = c.verdict == dbcheck::Crosscheck::Verdict::Agree      ? Status::Ok
                     : c.verdict == dbcheck::Crosscheck::Verdict::Disagree ? Status::RedFlag
                                                                            : Status::Skipped;
        rows.push_back(std::move(row));
        tick(cfg, "crosscheck " + D.value().get_str());
    }
    return finish(crosscheck_columns(), std::move(rows));
}

std::string format_result(CommandResult const & r, report::Format f)
{
    std::string out = report::render(r.table, f);
    if (f == report::Format::Table)
        for (auto const & n : r.notes)
            out += "# " + n + "\n";
    return out;
}

} // namespace quadclass::cli
