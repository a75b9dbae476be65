#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "quadclass/cli.hpp"
#include "quadclass/error.hpp"

using namespace quadclass;
using arith::Int;

namespace {

Int parse_int(std::string const & s)
{
    Int v;
    if (v.set_str(s, 10) != 0)
        throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

std::vector<Int> parse_int_list(std::string const & s)
{
    std::vector<Int> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        auto item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty())
            out.push_back(parse_int(item));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Class numbers of imaginary quadratic fields and checks of divisibility results"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "table", out, enum_bound = "1000000000000000";
    unsigned workers = 1;
    std::uint64_t struct_bound = 10'000'000, effort = 100'000'000;
    unsigned long ymax = dioph::default_y_max;
    bool offline = false, quiet = false;
    app.add_option("--format", format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--out", out, "write data here instead of stdout");
    app.add_option("--workers", workers, "parallel tasks in sweeps")->check(CLI::PositiveNumber);
    app.add_option("--enum-bound", enum_bound, "largest |D| for class-number enumeration");
    app.add_option("--struct-bound", struct_bound, "largest h for group-structure work")->check(CLI::PositiveNumber);
    app.add_option("--effort", effort, "Pollard rho iteration budget")->check(CLI::PositiveNumber);
    app.add_option("--ymax", ymax, "exponent bound for Diophantine scans")->check(CLI::PositiveNumber);
    app.add_flag("--offline", offline, "never query the remote database");
    app.add_flag("--quiet", quiet, "no progress on stderr");

    std::string value, disc_value;
    bool list = false;
    auto * classnum = app.add_subcommand("classnum", "class number of one field or discriminant");
    classnum->add_option("-d", value, "radicand of Q(sqrt(d))");
    classnum->add_option("--disc", disc_value, "discriminant D");
    classnum->add_flag("--list", list, "also print the reduced forms");

    auto * classgroup = app.add_subcommand("classgroup", "elementary divisors and generators");
    classgroup->add_option("-d", value, "radicand of Q(sqrt(d))");
    classgroup->add_option("--disc", disc_value, "discriminant D");

    std::string plist = "3", qlist = "3,5,7";
    unsigned long rmax = 1;
    auto add_family_opts = [&](CLI::App * sub) {
        sub->add_option("--p", plist, "odd primes p, e.g. 3,5,7");
        sub->add_option("--q", qlist, "odd primes q, e.g. 3..13");
        sub->add_option("--rmax", rmax, "largest r in m = q^r");
    };
    auto * thm1 = app.add_subcommand("verify-thm1", "p | h(Q(sqrt(1 - 2 m^p))) with witness and pth-power check");
    add_family_opts(thm1);
    auto * pairs = app.add_subcommand("verify-pairs", "p | h on both Q(sqrt(d)) and Q(sqrt(d+1))");
    add_family_opts(pairs);

    unsigned long umax = 10;
    std::string klist = "3,5";
    auto * loub = app.add_subcommand("louboutin", "k | h(Q(sqrt(1 - 4 U^k)))");
    loub->add_option("--umax", umax, "U runs over 2..umax");
    loub->add_option("--k", klist, "odd k values");

    unsigned lambda2 = 2;
    std::string d1 = "1", d2 = "1", kval = "5";
    auto * dio = app.add_subcommand("dioph", "solutions of D1 x^2 + D2 = lambda^2 k^y");
    dio->add_option("--lambda2", lambda2, "lambda^2: 1, 2 or 4");
    dio->add_option("--d1", d1);
    dio->add_option("--d2", d2);
    dio->add_option("--k", kval);

    std::string drange = "4..2000", lq = "3..97";
    auto * lemma = app.add_subcommand("lemma23", "at most one solution of D x^2 + 1 = 2 q^y");
    lemma->add_option("--d", drange, "range of D, e.g. 4..2000");
    lemma->add_option("--q", lq, "odd primes q");

    std::string lambdas = "2,4", fk = "2..40", shift = "double";
    unsigned long d1max = 40, d2max = 40;
    auto * fam = app.add_subcommand("families", "instances with two or more solutions and their families");
    fam->add_option("--lambda2", lambdas, "lambda^2 values");
    fam->add_option("--d1-max", d1max);
    fam->add_option("--d2-max", d2max);
    fam->add_option("--k", fk, "prime k values");
    fam->add_option("--shift", shift, "Fibonacci index shift for D1")->check(CLI::IsMember({"double", "single"}));

    unsigned long sp = 3, qmax = 13;
    auto * scan = app.add_subcommand("scan-s", "members m = q^r of the set S for one p");
    scan->add_option("--p", sp);
    scan->add_option("--qmax", qmax);
    scan->add_option("--rmax", rmax);

    std::string d0 = "-53", xmax = "100";
    unsigned long siegel_p = 3;
    auto * sieg = app.add_subcommand("siegel", "integer points y^2 = (1 - 2 x^p) / d0");
    sieg->add_option("--d0", d0);
    sieg->add_option("--p", siegel_p);
    sieg->add_option("--xmax", xmax);

    std::string discs = "-3,-23";
    auto * cross = app.add_subcommand("crosscheck", "compare h with the remote number-field database");
    cross->add_option("--disc", discs, "fundamental discriminants, comma separated");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        // --help and friends still exit 0; every usage error is exit 1
        return app.exit(e) == 0 ? cli::exit_ok : cli::exit_failure;
    }

    try {
        cli::RunConfig cfg;
        cfg.format = report::parse_format(format);
        cfg.out = out;
        cfg.workers = workers;
        cfg.limits.enum_bound = parse_int(enum_bound);
        cfg.limits.struct_bound = struct_bound;
        cfg.limits.budget.rho_iterations = effort;
        cfg.y_max = ymax;
        cfg.offline = offline;
        if (!quiet)
            cfg.progress = [](std::string const & s) { std::cerr << "[quadclass] " << s << '\n'; };

        auto field_input = [&](CLI::App * sub) {
            if (value.empty() == disc_value.empty())
                throw std::invalid_argument(sub->get_name() + ": give exactly one of -d and --disc");
            return std::pair{parse_int(disc_value.empty() ? value : disc_value), !disc_value.empty()};
        };

        cli::CommandResult res;
        if (*classnum) {
            auto [v, is_disc] = field_input(classnum);
            res = cli::classnum(v, is_disc, list, cfg);
        } else if (*classgroup) {
            auto [v, is_disc] = field_input(classgroup);
            res = cli::classgroup(v, is_disc, cfg);
        } else if (*thm1) {
            res = cli::verify_thm1(cli::parse_prime_list(plist), cli::parse_prime_list(qlist), rmax, cfg);
        } else if (*pairs) {
            res = cli::verify_pairs(cli::parse_prime_list(plist), cli::parse_prime_list(qlist), rmax, cfg);
        } else if (*loub) {
            res = cli::louboutin(umax, cli::parse_list(klist), cfg);
        } else if (*dio) {
            auto inst = dioph::DiophInstance::make(lambda2, parse_int(d1), parse_int(d2), parse_int(kval));
            res = cli::dioph(inst, cfg);
        } else if (*lemma) {
            auto [lo, hi] = cli::parse_range(drange);
            res = cli::lemma23(lo, hi, cli::parse_prime_list(lq), cfg);
        } else if (*fam) {
            std::vector<unsigned> ls;
            for (auto l : cli::parse_list(lambdas))
                ls.push_back(static_cast<unsigned>(l));
            res = cli::families(ls, d1max, d2max, cli::parse_prime_list(fk),
                                shift == "single" ? dioph::FibonacciShift::Single : dioph::FibonacciShift::Double,
                                cfg);
        } else if (*scan) {
            res = cli::scan_s(sp, qmax, rmax, cfg);
        } else if (*sieg) {
            res = cli::siegel(parse_int(d0), siegel_p, parse_int(xmax), cfg);
        } else if (*cross) {
            auto db = dbcheck::DbConfig::from_env();
            db.offline = offline;
            dbcheck::Client client(db);
            res = cli::crosscheck(parse_int_list(discs), client, cfg);
        }

        std::string text = cli::format_result(res, cfg.format);
        if (cfg.out.empty()) {
            std::cout << text << std::flush;
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            f << text;
            if (!f) {
                std::cerr << "quadclass: cannot write " << cfg.out << '\n';
                return cli::exit_failure;
            }
        }
        if (res.exit_code == cli::exit_red_flag)
            std::cerr << "quadclass: RED FLAG - a verdict contradicts the expected result\n";
        return res.exit_code;
    } catch (std::exception const & e) {
        std::cerr << "quadclass: " << e.what() << '\n';
        return cli::exit_failure;
    }
}
