#include "charsum/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "charsum/json_io.hpp"
#include "charsum/oracle.hpp"
#include "charsum/ring2adic.hpp"
#include "charsum/sweep.hpp"

namespace charsum::cli {

namespace {

using json_io::json;
using sweep::InstanceParams;

const std::vector<std::uint64_t> kDefaultExhaustiveKs = {1, 2, 3, 4, 6, 8, 12};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_instance_flags(CLI::App& cmd, InstanceParams& p, bool required)
{
    const auto sign = CLI::IsMember({1, -1});
    auto* m = cmd.add_option("--m", p.m, "modulus exponent (sum over Z/2^m)");
    auto* a = cmd.add_option("--A", p.A, "coefficient A in [0, 2^m)");
    auto* b = cmd.add_option("--B", p.B, "constant B in [0, 2^m)");
    auto* k = cmd.add_option("--k", p.k, "exponent k >= 1");
    auto* c1 = cmd.add_option("--c1", p.c1, "chi1(5) = e(c1 / 2^(m-2)), 1 <= c1 <= 2^(m-2)");
    auto* s1 = cmd.add_option("--s1", p.s1, "chi1(-1)")->check(sign);
    auto* c2 = cmd.add_option("--c2", p.c2, "chi2(5) = e(c2 / 2^(m-2))");
    auto* s2 = cmd.add_option("--s2", p.s2, "chi2(-1)")->check(sign);
    if (required) {
        for (auto* opt : {m, a, b, k, c1, s1, c2, s2}) {
            opt->required();
        }
    }
}

void check_width(unsigned m)
{
    if (m > ring2adic::kMaxModulusExponent) {
        throw ring2adic::WidthCapExceeded("m=" + std::to_string(m) + " exceeds the supported cap m <= " +
                                          std::to_string(ring2adic::kMaxModulusExponent));
    }
    if (m < 3) {
        throw UsageError("m must be at least 3");
    }
}

// Construct once to surface malformed parameters as usage errors.
void validate(const InstanceParams& p)
{
    check_width(p.m);
    try {
        p.instance().validate();
        (void)p.chi1();
        (void)p.chi2();
    } catch (const ring2adic::WidthCapExceeded&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::optional<unsigned> jobs_flag(unsigned jobs) { return jobs == 0 ? std::nullopt : std::optional<unsigned>(jobs); }

int cmd_eval(const InstanceParams& p, const std::string& method, unsigned jobs, std::ostream& out)
{
    validate(p);
    const bool want_closed = method != "brute";
    const bool want_brute = method != "closed";
    json doc = {{"instance", json_io::to_json(p)}, {"method", method}};
    std::optional<evaluator::ClosedForm> closed;
    if (want_closed) {
        closed = evaluator::evaluate(p.instance(), p.chi1(), p.chi2());
        doc["closed_form"] = json_io::to_json(*closed);
    }
    std::optional<cyclotomic::CycInt> brute;
    if (want_brute) {
        brute = oracle::brute_force(p.instance(), p.chi1(), p.chi2(), sweep::resolve_jobs(jobs_flag(jobs)));
        doc["oracle"] = json_io::to_json(*brute);
    }
    int code = kSuccess;
    if (closed && brute) {
        const bool match = closed->value == *brute;
        doc["match"] = match;
        code = match ? kSuccess : kMismatch;
    }
    out << doc.dump(2) << '\n';
    return code;
}

struct CheckFlags {
    unsigned m_min = 3;
    unsigned m_max = 8;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    bool exhaustive = false;
    std::vector<std::uint64_t> ks = kDefaultExhaustiveKs;
    unsigned jobs = 0;
};

int cmd_check(const CheckFlags& f, std::ostream& out)
{
    check_width(f.m_max);
    if (f.m_min < 3 || f.m_min > f.m_max) {
        throw UsageError("need 3 <= m-min <= m-max");
    }
    const unsigned jobs = sweep::resolve_jobs(jobs_flag(f.jobs));
    sweep::RunReport report;
    if (f.exhaustive) {
        if (f.m_max > 8) {
            throw UsageError("--exhaustive is limited to m-max <= 8");
        }
        const sweep::ExhaustiveGrid grid(f.m_min, f.m_max, f.ks);
        report = sweep::run_check([&grid](std::size_t i) { return grid.at(i); }, grid.size(), jobs);
    } else {
        const sweep::BiasedSampler sampler(f.seed, f.m_min, f.m_max);
        report = sweep::run_check([&sampler](std::size_t i) { return sampler.at(i); }, f.samples, jobs);
        report.seed = f.seed;
    }
    out << json_io::to_json(report).dump(2) << '\n';
    return report.ok() ? kSuccess : kMismatch;
}

int cmd_bench(const InstanceParams& p, unsigned min_repeats, std::ostream& out)
{
    validate(p);
    using clock = std::chrono::steady_clock;
    const auto inst = p.instance();
    const auto chi1 = p.chi1();
    const auto chi2 = p.chi2();

    // Repeat the closed form until the total is long enough to time reliably.
    evaluator::ClosedForm closed = evaluator::evaluate(inst, chi1, chi2);
    std::size_t reps = 0;
    const auto t0 = clock::now();
    auto elapsed = clock::duration::zero();
    while (reps < min_repeats || elapsed < std::chrono::milliseconds(20)) {
        closed = evaluator::evaluate(inst, chi1, chi2);
        ++reps;
        elapsed = clock::now() - t0;
    }
    const double closed_s = std::chrono::duration<double>(elapsed).count() / static_cast<double>(reps);

    const auto t1 = clock::now();
    const cyclotomic::CycInt brute = oracle::brute_force(inst, chi1, chi2);
    const double brute_s = std::chrono::duration<double>(clock::now() - t1).count();

    const json doc = {
        {"instance", json_io::to_json(p)},
        {"case", evaluator::case_name(closed.tag)},
        {"closed_seconds", closed_s},
        {"closed_repeats", reps},
        {"brute_seconds", brute_s},
        {"ratio", closed_s > 0 ? brute_s / closed_s : 0.0},
        {"match", closed.value == brute},
    };
    out << doc.dump(2) << '\n';
    return closed.value == brute ? kSuccess : kMismatch;
}

struct GridFlags {
    std::string out_path;
    unsigned m_min = 5;
    unsigned m_max = 5;
    std::vector<std::uint64_t> ks = {1, 2, 3, 4};
    std::vector<std::uint64_t> As;
    std::vector<std::uint64_t> Bs;
    std::vector<std::uint64_t> c1s;
    std::vector<std::uint64_t> c2s;
    std::vector<int> s1s = {1, -1};
    std::vector<int> s2s = {1, -1};
    unsigned jobs = 0;
};

std::vector<InstanceParams> expand_grid(const GridFlags& f)
{
    std::vector<InstanceParams> rows;
    for (unsigned m = f.m_min; m <= f.m_max; ++m) {
        const auto all_up_to = [](std::uint64_t first, std::uint64_t last, std::uint64_t step) {
            std::vector<std::uint64_t> v;
            for (std::uint64_t x = first; x <= last; x += step) {
                v.push_back(x);
            }
            return v;
        };
        const auto As = f.As.empty() ? all_up_to(0, ring2adic::pow2(m) - 1, 1) : f.As;
        const auto Bs = f.Bs.empty() ? all_up_to(1, ring2adic::pow2(m) - 1, 2) : f.Bs;
        const auto c1s = f.c1s.empty() ? all_up_to(1, ring2adic::pow2(m - 2), 1) : f.c1s;
        const auto c2s = f.c2s.empty() ? all_up_to(1, ring2adic::pow2(m - 2), 1) : f.c2s;
        for (auto A : As)
            for (auto B : Bs)
                for (auto k : f.ks)
                    for (auto c1 : c1s)
                        for (int s1 : f.s1s)
                            for (auto c2 : c2s)
                                for (int s2 : f.s2s) {
                                    rows.push_back({m, A, B, k, c1, s1, c2, s2});
                                }
    }
    return rows;
}

int cmd_grid(const GridFlags& f, std::ostream& out)
{
    check_width(f.m_max);
    if (f.m_min < 3 || f.m_min > f.m_max) {
        throw UsageError("need 3 <= m-min <= m-max");
    }
    const std::vector<InstanceParams> rows = expand_grid(f);
    for (const auto& p : rows) {
        validate(p);
    }
    std::ofstream file(f.out_path);
    if (!file) {
        throw IoError("cannot open " + f.out_path + " for writing");
    }

    std::vector<sweep::CheckResult> results(rows.size());
    sweep::parallel_for(rows.size(), sweep::resolve_jobs(jobs_flag(f.jobs)),
                        [&](std::size_t i, unsigned) { results[i] = sweep::check_instance(rows[i]); });

    std::size_t mismatches = 0;
    file << "m,A,B,k,c1,s1,c2,s2,case,magnitude_halves,match,re,im\n";
    file << std::setprecision(17);
    for (const auto& res : results) {
        const auto& p = res.params;
        const auto z = cyclotomic::approx_complex(res.closed.value);
        file << p.m << ',' << p.A << ',' << p.B << ',' << p.k << ',' << p.c1 << ',' << p.s1 << ',' << p.c2 << ','
             << p.s2 << ',' << evaluator::case_name(res.closed.tag) << ',';
        if (res.closed.magnitude_halves) {
            file << *res.closed.magnitude_halves;
        }
        file << ',' << (res.match ? "true" : "false") << ',' << z.real() << ',' << z.imag() << '\n';
        mismatches += res.match ? 0 : 1;
    }
    file.close();
    if (!file) {
        throw IoError("failed writing " + f.out_path);
    }
    out << json{{"rows", results.size()}, {"mismatches", mismatches}, {"out", f.out_path}}.dump(2) << '\n';
    return mismatches == 0 ? kSuccess : kMismatch;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact evaluation of complete character sums over Z/2^m", "charsum"};
    app.require_subcommand(1);

    InstanceParams eval_params;
    std::string method = "both";
    unsigned eval_jobs = 0;
    auto* eval = app.add_subcommand("eval", "evaluate one sum in closed form and/or by brute force");
    add_instance_flags(*eval, eval_params, true);
    eval->add_option("--method", method, "closed, brute or both")->check(CLI::IsMember({"closed", "brute", "both"}));
    eval->add_option("--jobs", eval_jobs, "oracle worker threads (default: CHARSUM_JOBS or all cores)");

    CheckFlags check_flags;
    auto* check = app.add_subcommand("check", "compare closed form against brute force over many instances");
    check->add_option("--m-min", check_flags.m_min);
    check->add_option("--m-max", check_flags.m_max);
    check->add_option("--samples", check_flags.samples, "random instances to draw");
    check->add_option("--seed", check_flags.seed);
    check->add_flag("--exhaustive", check_flags.exhaustive, "enumerate every A, odd B, k and character pair");
    check->add_option("--k-list", check_flags.ks, "exponents used by --exhaustive")->delimiter(',');
    check->add_option("--jobs", check_flags.jobs);

    InstanceParams bench_params{24, 2, 1, 1, 2, 1, 1, 1};
    unsigned min_repeats = 100;
    auto* bench = app.add_subcommand("bench", "time closed form against brute force");
    add_instance_flags(*bench, bench_params, false);
    bench->get_option("--m")->required();
    bench->add_option("--repeats", min_repeats, "minimum closed-form repetitions");

    GridFlags grid_flags;
    auto* grid = app.add_subcommand("grid", "write a CSV row per instance of a parameter grid");
    grid->add_option("--out", grid_flags.out_path, "CSV output path")->required();
    grid->add_option("--m-min", grid_flags.m_min);
    grid->add_option("--m-max", grid_flags.m_max);
    grid->add_option("--k", grid_flags.ks)->delimiter(',');
    grid->add_option("--A", grid_flags.As, "default: all of [0, 2^m)")->delimiter(',');
    grid->add_option("--B", grid_flags.Bs, "default: all odd B")->delimiter(',');
    grid->add_option("--c1", grid_flags.c1s, "default: all")->delimiter(',');
    grid->add_option("--c2", grid_flags.c2s, "default: all")->delimiter(',');
    grid->add_option("--s1", grid_flags.s1s)->delimiter(',');
    grid->add_option("--s2", grid_flags.s2s)->delimiter(',');
    grid->add_option("--jobs", grid_flags.jobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    try {
        if (*eval) {
            return cmd_eval(eval_params, method, eval_jobs, out);
        }
        if (*check) {
            return cmd_check(check_flags, out);
        }
        if (*bench) {
            return cmd_bench(bench_params, min_repeats, out);
        }
        return cmd_grid(grid_flags, out);
    } catch (const ring2adic::WidthCapExceeded& e) {
        err << "width cap: " << e.what() << '\n';
        return kWidthCap;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    }
}

}  // namespace charsum::cli
