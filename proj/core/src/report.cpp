#include "roa/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace roa {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Provenance make_provenance(const ExperimentConfig& config) {
    Provenance p;
    p.config_hash = config_hash(config);
    p.root_seed = config.root_seed;
    p.mode = config.mode;
    p.gate_bias = config.gate_bias;
    return p;
}

namespace {

json ci_json(const ConfidenceInterval& ci) {
    return {{"method", ci.method}, {"point", ci.point}, {"lo", ci.lo},
            {"hi", ci.hi},         {"alpha", ci.alpha}, {"dof", ci.dof}};
}

json ledger_json(const BudgetAllocation& a, long runtime_runs) {
    return {{"star", a.ledger.star},
            {"two_star", a.ledger.two_star},
            {"three_star", a.ledger.three_star},
            {"cv_extra", a.ledger.cv_extra},
            {"baseline", a.ledger.baseline},
            {"nominal", a.ledger.nominal},
            {"full", a.ledger.full},
            {"overdraft_nominal", a.ledger.overdraft_nominal},
            {"overdraft_full", a.ledger.overdraft_full},
            {"runtime_model_runs", runtime_runs}};
}

} // namespace

std::string report_json(const AnalysisResult& r, const Provenance& prov) {
    const BudgetAllocation& a = r.run.alloc;
    json j;
    j["provenance"] = {{"config_hash", prov.config_hash},
                       {"root_seed", prov.root_seed},
                       {"mode", prov.mode},
                       {"gate_bias", prov.gate_bias},
                       {"version", prov.version}};
    j["allocation"] = {{"budget", a.total_budget}, {"n", a.n},  {"m_star", a.m_star},
                       {"b1", a.b1},               {"r", a.r},  {"b2", a.b2},
                       {"overridden", a.overridden}};
    j["ledger"] = ledger_json(a, r.run.model_runs);
    j["point"] = {{"plug_in_mean", r.plug_in_mean},
                  {"debiased", r.bias_corrected.point},
                  {"debiased_vr", r.bias_corrected_vr.point},
                  {"w_mean", r.w_mean},
                  {"w_cv_mean", r.w_cv_mean},
                  {"baseline_mean", r.baseline_mean}};
    j["hoif"] = {{"beta_hat", r.hoif.beta_hat},
                 {"mode", to_string(r.hoif.mode)},
                 {"lambda", r.hoif.lambda},
                 {"eta", r.hoif.eta},
                 {"c2_star", r.hoif.c2_star},
                 {"pair_sum", r.hoif.pair_sum}};
    j["variance"] = {{"sigma2_u", r.variance.sigma2_u},
                     {"iu_var", r.variance.iu_var},
                     {"iu_var_raw", r.variance.iu_var_raw},
                     {"groups",
                      {{"y_var", r.variance.y_var_group},
                       {"bias_var", r.variance.bias_var},
                       {"bias_cov", r.variance.bias_cov},
                       {"between", r.variance.between_group},
                       {"within", r.variance.within_group}}},
                     {"total_debiased", r.variance.total_debiased},
                     {"total_debiased_vr", r.variance_vr.total_debiased}};
    json cis = json::array();
    if (!r.crude.method.empty()) cis.push_back(ci_json(r.crude));
    cis.push_back(ci_json(r.barton));
    cis.push_back(ci_json(r.lamqian));
    cis.push_back(ci_json(r.bias_corrected));
    cis.push_back(ci_json(r.bias_corrected_vr));
    j["confidence_intervals"] = cis;
    return j.dump(2);
}

void write_report_json(const AnalysisResult& r, const Provenance& prov,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report_json: cannot open " + path.string());
    out << report_json(r, prov) << '\n';
}

void write_cells_csv(const AnalysisResult& r, const Provenance& prov,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_cells_csv: cannot open " + path.string());
    out << "# config_hash=" << prov.config_hash << " root_seed=" << prov.root_seed
        << " mode=" << prov.mode << " gate_bias=" << (prov.gate_bias ? 1 : 0)
        << " version=" << prov.version << '\n';
    out << "b1,r,y_star,y_2star_mean,y_3star_mean,delta_star,gamma_hat,w_hat,t_stat,"
           "significant,c1_hat,control,w_hat_cv,y_debiased,y_debiased_vr\n";
    const OutputTensor& t = r.run.tensor;
    for (std::size_t b1 = 0; b1 < t.b1_count(); ++b1) {
        for (std::size_t rep = 0; rep < t.r_count(); ++rep) {
            const std::size_t idx = b1 * t.r_count() + rep;
            const FibResult& f = r.fib[idx];
            double m2 = 0.0, m3 = 0.0;
            for (std::size_t b2 = 0; b2 < t.b2_count(); ++b2) {
                m2 += t.y_2star(b1, rep, b2);
                m3 += t.y_3star(b1, rep, b2);
            }
            m2 /= static_cast<double>(t.b2_count());
            m3 /= static_cast<double>(t.b2_count());
            out << b1 << ',' << rep << ',' << format_double(t.y_star(b1, rep)) << ','
                << format_double(m2) << ',' << format_double(m3) << ','
                << format_double(f.delta_star) << ',' << format_double(f.gamma_hat) << ','
                << format_double(f.w_hat) << ',' << format_double(f.t_stat) << ','
                << (f.significant ? 1 : 0) << ',' << format_double(f.c1_hat) << ','
                << format_double(f.control) << ',' << format_double(f.w_hat_cv) << ','
                << format_double(r.yd[idx]) << ',' << format_double(r.yd_vr[idx]) << '\n';
        }
    }
}

} // namespace roa
