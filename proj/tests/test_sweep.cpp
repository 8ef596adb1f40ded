#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <set>

#include "charsum/json_io.hpp"
#include "charsum/sweep.hpp"

using namespace charsum::sweep;
using charsum::evaluator::CaseTag;
using u64 = std::uint64_t;

TEST_CASE("exhaustive grid size and decoding")
{
    const ExhaustiveGrid g3(3, 3, {1, 2});
    // 8 values of A, 4 odd B, 2 exponents, 4 characters each side.
    CHECK(g3.size() == 8 * 4 * 2 * 4 * 4);

    std::set<InstanceParams> seen;
    for (std::size_t i = 0; i < g3.size(); ++i) {
        const InstanceParams p = g3.at(i);
        CHECK(p.m == 3);
        CHECK(p.B % 2 == 1);
        CHECK(p.A < 8);
        CHECK((p.k == 1 || p.k == 2));
        seen.insert(p);
    }
    CHECK(seen.size() == g3.size());

    const ExhaustiveGrid g35(3, 5, {1});
    CHECK(g35.size() == 8 * 4 * 16 + 16 * 8 * 64 + 32 * 16 * 256);
    CHECK(g35.at(g35.size() - 1).m == 5);
    CHECK_THROWS_AS(g35.at(g35.size()), std::out_of_range);
    CHECK_THROWS_AS(ExhaustiveGrid(3, 13, {1}), std::invalid_argument);
    CHECK_THROWS_AS(ExhaustiveGrid(3, 4, {}), std::invalid_argument);
}

TEST_CASE("sampler is a pure function of seed and index")
{
    const BiasedSampler a(42, 6, 14);
    const BiasedSampler b(42, 6, 14);
    const BiasedSampler c(43, 6, 14);
    int differ = 0;
    for (std::size_t i = 0; i < 500; ++i) {
        const InstanceParams p = a.at(i);
        CHECK(p == b.at(i));
        CHECK(p.m >= 6);
        CHECK(p.m <= 14);
        CHECK_NOTHROW(p.chi1());
        CHECK_NOTHROW(p.chi2());
        CHECK_NOTHROW(p.instance().validate());
        differ += p != c.at(i);
    }
    CHECK(differ > 400);
    // Reverse order gives the same draws.
    for (std::size_t i = 500; i-- > 0;) {
        CHECK(a.at(i) == b.at(i));
    }
}

TEST_CASE("sampler reaches every case")
{
    const BiasedSampler s(9, 6, 10);
    const RunReport r = run_check([&s](std::size_t i) { return s.at(i); }, 6000, 1);
    CHECK(r.ok());
    for (const char* name : {"LargeEven", "LargeOdd", "MidRange", "EdgeT3", "EdgeT2", "Tiny", "ZeroParity",
                             "ZeroImprimitive", "ZeroCondition", "Reduced"}) {
        CAPTURE(name);
        CHECK(r.case_counts.count(name) == 1);
        CHECK(r.case_counts.at(name) >= 100);
    }
}

TEST_CASE("run_check does not depend on job count")
{
    const BiasedSampler s(5, 6, 9);
    const auto source = [&s](std::size_t i) { return s.at(i); };
    const RunReport one = run_check(source, 1500, 1);
    const RunReport four = run_check(source, 1500, 4);
    CHECK(one.instances_checked == 1500);
    CHECK(four.instances_checked == 1500);
    CHECK(one.case_counts == four.case_counts);
    CHECK(one.mismatches == four.mismatches);
    CHECK(one.ok());
}

TEST_CASE("parallel_for visits each index once")
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 3, [&hits](std::size_t i, unsigned worker) {
        CHECK(worker < 3);
        hits[i].fetch_add(1);
    });
    for (const auto& h : hits) {
        CHECK(h.load() == 1);
    }
}

TEST_CASE("resolve_jobs")
{
    ::setenv("CHARSUM_JOBS", "3", 1);
    CHECK(resolve_jobs(std::nullopt) == 3);
    CHECK(resolve_jobs(5u) == 5);
    ::setenv("CHARSUM_JOBS", "zero", 1);
    CHECK(resolve_jobs(std::nullopt) >= 1);
    ::unsetenv("CHARSUM_JOBS");
    CHECK(resolve_jobs(std::nullopt) >= 1);
}

TEST_CASE("check_instance")
{
    const CheckResult r = check_instance({7, 2, 1, 1, 2, 1, 1, 1});
    CHECK(r.match);
    CHECK(r.closed.tag == CaseTag::LargeEven);
    CHECK(r.oracle == r.closed.value);
    CHECK(to_string(r.params).find("m=7") != std::string::npos);
}

TEST_CASE("json round trip")
{
    using namespace charsum::json_io;
    const CheckResult r = check_instance({8, 2, 1, 1, 6, -1, 3, 1});
    const json j = to_json(r.closed);
    CHECK(j.at("case") == "LargeOdd");
    CHECK(j.at("magnitude_halves") == 9);
    CHECK(j.at("h").is_number_integer());
    CHECK(cycint_from_json(j.at("value")) == r.closed.value);
    const double re = j.at("approx").at("re");
    const double im = j.at("approx").at("im");
    CHECK(re * re + im * im == doctest::Approx(512.0).epsilon(1e-9));

    const json zero = to_json(check_instance({5, 1, 3, 1, 1, 1, 1, 1}).closed);
    CHECK(zero.at("case") == "ZeroParity");
    CHECK(zero.at("magnitude_halves").is_null());

    CHECK_THROWS(cycint_from_json(json{{"ring_exponent", 3}, {"coeffs", {1, 2}}}));

    RunReport report;
    report.instances_checked = 3;
    report.case_counts["Tiny"] = 3;
    report.seed = 11;
    const json rj = to_json(report);
    CHECK(rj.at("instances_checked") == 3);
    CHECK(rj.at("mismatches").empty());
    CHECK(rj.at("seed") == 11);
    CHECK(rj.at("wall_time").contains("total_seconds"));
}
