#include "charsum/json_io.hpp"

namespace charsum::json_io {

namespace {

template <class T>
json nullable(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const cyclotomic::CycInt& value)
{
    return {{"ring_exponent", value.ring_exponent()}, {"coeffs", value.dense()}};
}

cyclotomic::CycInt cycint_from_json(const json& j)
{
    const auto r = j.at("ring_exponent").get<unsigned>();
    const auto coeffs = j.at("coeffs").get<std::vector<std::int64_t>>();
    return cyclotomic::CycInt::from_dense(r, coeffs);
}

json to_json(const evaluator::ClosedForm& form)
{
    const auto z = cyclotomic::approx_complex(form.value);
    json out = {
        {"case", evaluator::case_name(form.tag)},
        {"magnitude_halves", nullable(form.magnitude_halves)},
        {"x0", nullable(form.witness.x0)},
        {"lambda_parity", nullable(form.witness.lambda_parity)},
        {"h", nullable(form.witness.h)},
        {"scale_log2", form.witness.scale_log2},
        {"value", to_json(form.value)},
        {"approx", {{"re", z.real()}, {"im", z.imag()}}},
    };
    if (form.witness.inner_case) {
        out["inner_case"] = evaluator::case_name(*form.witness.inner_case);
    }
    return out;
}

json to_json(const sweep::InstanceParams& p)
{
    return {{"m", p.m},   {"A", p.A},   {"B", p.B},   {"k", p.k},
            {"c1", p.c1}, {"s1", p.s1}, {"c2", p.c2}, {"s2", p.s2}};
}

json to_json(const sweep::RunReport& report)
{
    json mismatches = json::array();
    for (const auto& p : report.mismatches) {
        mismatches.push_back(to_json(p));
    }
    return {
        {"instances_checked", report.instances_checked},
        {"mismatches", mismatches},
        {"case_counts", report.case_counts},
        {"wall_time", {{"closed_seconds", report.closed_seconds},
                       {"brute_seconds", report.brute_seconds},
                       {"total_seconds", report.wall_seconds}}},
        {"seed", nullable(report.seed)},
    };
}

}  // namespace charsum::json_io
