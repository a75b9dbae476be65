#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quadclass/dbcheck.hpp"
#include "quadclass/dioph.hpp"
#include "quadclass/family.hpp"
#include "quadclass/report.hpp"

namespace quadclass::cli {

using arith::Int;

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,     // usage or unrecoverable error
    exit_red_flag = 2,    // a verdict contradicts the expected result
    exit_skips = 3,       // no red flag, but something went unevaluated
};

struct RunConfig
{
    report::Format format = report::Format::Table;
    std::string out;                      // empty: stdout
    unsigned workers = 1;
    qform::Limits limits;
    unsigned long y_max = dioph::default_y_max;
    bool offline = false;
    /* Progress lines; the CLI points this at stderr. */
    std::function<void(std::string const &)> progress;

    /* Throws std::invalid_argument on a zero bound or worker count. */
    void validate() const;
};

struct CommandResult
{
    report::Table table;
    int exit_code = exit_ok;
    std::vector<std::string> notes;
};

/* "3,5,7", "3..13" or a mix. Ranges in a prime list expand to the primes
 * they contain; an explicit non-prime is rejected. */
std::vector<unsigned long> parse_list(std::string_view text);
std::vector<unsigned long> parse_prime_list(std::string_view text);
std::pair<unsigned long, unsigned long> parse_range(std::string_view text);

/* Column schemas, exposed for parsing emitted tables back. */
std::vector<report::Column> classnum_columns();
std::vector<report::Column> classgroup_columns();
std::vector<report::Column> thm1_columns();
std::vector<report::Column> pairs_columns();
std::vector<report::Column> louboutin_columns();
std::vector<report::Column> dioph_columns();
std::vector<report::Column> lemma23_columns();
std::vector<report::Column> families_columns();
std::vector<report::Column> scan_s_columns();
std::vector<report::Column> siegel_columns();
std::vector<report::Column> crosscheck_columns();

/* value is a field radicand (any nonsquare integer) unless is_disc. */
CommandResult classnum(Int const & value, bool is_disc, bool list, RunConfig const & cfg);
CommandResult classgroup(Int const & value, bool is_disc, RunConfig const & cfg);

CommandResult verify_thm1(std::vector<unsigned long> ps, std::vector<unsigned long> qs, unsigned long r_max,
                          RunConfig const & cfg);
CommandResult verify_pairs(std::vector<unsigned long> ps, std::vector<unsigned long> qs, unsigned long r_max,
                           RunConfig const & cfg);
CommandResult louboutin(unsigned long u_max, std::vector<unsigned long> ks, RunConfig const & cfg);

CommandResult dioph(dioph::DiophInstance const & inst, RunConfig const & cfg);
CommandResult lemma23(unsigned long d_lo, unsigned long d_hi, std::vector<unsigned long> qs, RunConfig const & cfg);
/* Every coprime (D1, D2) in the boxes, k in ks, lambda^2 in lambdas; rows
 * only for instances with two or more solutions. */
CommandResult families(std::vector<unsigned> lambdas, unsigned long d1_max, unsigned long d2_max,
                       std::vector<unsigned long> ks, dioph::FibonacciShift shift, RunConfig const & cfg);
CommandResult scan_s(unsigned long p, unsigned long q_max, unsigned long r_max, RunConfig const & cfg);
CommandResult siegel(Int const & d0, unsigned long p, Int const & x_max, RunConfig const & cfg);

CommandResult crosscheck(std::vector<Int> const & discs, dbcheck::Client & client, RunConfig const & cfg);

/* render() plus the notes, which only the text format shows. */
std::string format_result(CommandResult const & r, report::Format f);

} // namespace quadclass::cli
