#include "histfuse/json_io.hpp"

namespace histfuse {

using nlohmann::json;

namespace la {

void to_json(json& j, const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    j = json{{"rows", std::move(rows)}};
    if (m.rows() == m.cols()) j["dim"] = m.rows();
}

void from_json(const json& j, Matrix& m) {
    const json& rows = j.is_array() ? j : j.at("rows");
    if (!rows.is_array() || rows.empty())
        throw DomainError("ParseError", "matrix needs a nonempty 'rows' array");
    const std::size_t r = rows.size();
    const std::size_t c = rows[0].size();
    m = Matrix(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c)
            throw DomainError("ParseError", "matrix rows have uneven lengths");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = rows[i][k].get<double>();
    }
}

void to_json(json& j, const SymMatrix& m) { to_json(j, m.mat()); }

void from_json(const json& j, SymMatrix& m) {
    Matrix full;
    from_json(j, full);
    if (j.is_object() && j.contains("dim") && j.at("dim").get<std::size_t>() != full.rows())
        throw DomainError("ParseError", "matrix 'dim' disagrees with 'rows'");
    m = SymMatrix::from_matrix(full);
}

}  // namespace la

void to_json(json& j, const VarianceBlocks& v) {
    j = json{{"tt", v.tt}, {"te", v.te}, {"ee", v.ee}};
}

void from_json(const json& j, VarianceBlocks& v) {
    v = VarianceBlocks(j.at("tt").get<la::SymMatrix>(), j.at("te").get<la::Matrix>(),
                       j.at("ee").get<la::SymMatrix>());
}

void to_json(json& j, const Estimate& e) {
    j = json{{"value", e.value}, {"scaled_var", e.scaled_var}, {"n", e.n}};
}

void from_json(const json& j, Estimate& e) {
    e = Estimate(j.at("value").get<std::vector<double>>(),
                 j.at("scaled_var").get<la::SymMatrix>(), j.at("n").get<std::int64_t>());
}

void to_json(json& j, const JointEstimate& e) {
    j = json{{"theta", e.theta}, {"eta", e.eta}, {"upsilon", e.upsilon}, {"n", e.n}};
}

void from_json(const json& j, JointEstimate& e) {
    e = JointEstimate(j.at("theta").get<std::vector<double>>(),
                      j.at("eta").get<std::vector<double>>(),
                      j.at("upsilon").get<VarianceBlocks>(), j.at("n").get<std::int64_t>());
}

void to_json(json& j, const HierarchyReport& r) {
    j = json{{"B_leq_A", r.b_leq_a},
             {"C_leq_Upsilon", r.c_leq_upsilon},
             {"B_leq_C", r.b_leq_c},
             {"tol", r.tol}};
}

HistoricalSet historical_from_json(const json& j) {
    std::vector<Estimate> estimates = j.at("estimates").get<std::vector<Estimate>>();
    std::int64_t total = 0;
    if (j.contains("total_m")) {
        total = j.at("total_m").get<std::int64_t>();
    } else {
        for (const Estimate& e : estimates) total += e.n;
    }
    return HistoricalSet(std::move(estimates), total);
}

json historical_to_json(const HistoricalSet& h) {
    return json{{"estimates", h.estimates()}, {"total_m", h.total_m()}};
}

ProblemSpec problem_spec_from_json(const json& j) {
    ProblemSpec spec;
    spec.d_theta = j.at("d_theta").get<la::Matrix>();
    spec.d_eta = j.at("d_eta").get<la::Matrix>();
    spec.sigma_psi = j.at("sigma_psi").get<la::SymMatrix>();
    spec.sigma = j.at("sigma").get<la::SymMatrix>();
    if (j.contains("upsilon_ee") && !j.at("upsilon_ee").is_null())
        spec.upsilon_ee = j.at("upsilon_ee").get<la::SymMatrix>();
    spec.rho = j.at("rho").get<double>();
    spec.validate();
    return spec;
}

json problem_spec_to_json(const ProblemSpec& spec) {
    json j{{"d_theta", spec.d_theta},
           {"d_eta", spec.d_eta},
           {"sigma_psi", spec.sigma_psi},
           {"sigma", spec.sigma},
           {"rho", spec.rho}};
    if (spec.upsilon_ee) j["upsilon_ee"] = *spec.upsilon_ee;
    return j;
}

namespace anova {

void to_json(json& j, const DesignXi& xi) {
    j = json{{"xi00", xi.xi00}, {"xi10", xi.xi10}, {"xi01", xi.xi01}, {"xi11", xi.xi11}};
}

void from_json(const json& j, DesignXi& xi) {
    xi.xi00 = j.at("xi00").get<double>();
    xi.xi10 = j.at("xi10").get<double>();
    xi.xi01 = j.at("xi01").get<double>();
    xi.xi11 = j.at("xi11").get<double>();
    xi.validate();
}

void to_json(json& j, const OptimalDesign& d) {
    j = json{{"xi", d.xi},
             {"value", d.value},
             {"xi00_at_floor", d.xi00_at_floor},
             {"xi10_at_step", d.xi10_at_step}};
}

void to_json(json& j, const Table1Row& r) {
    j = json{{"n", r.n}, {"m", r.m}, {"A_thetatheta", r.a_tt}, {"B_thetatheta", r.b_tt}};
}

void to_json(json& j, const Table2Row& r) {
    j = json{{"rho", r.rho},
             {"B_min", r.design.value},
             {"xi", r.design.xi},
             {"xi00_at_floor", r.design.xi00_at_floor},
             {"xi10_at_step", r.design.xi10_at_step}};
}

}  // namespace anova

namespace bliss {

void to_json(json& j, const Allocation& a) {
    j = json{{"n12", a.n12}, {"n1", a.n1}, {"n2", a.n2}, {"criterion", a.criterion}};
}

void to_json(json& j, const Table3Row& r) {
    j = json{{"m1", r.m1},       {"m2", r.m2},
             {"eta1", r.eta1},   {"eta2", r.eta2},
             {"n_min", r.result.n_min}, {"alloc", r.result.alloc}};
}

}  // namespace bliss

namespace mc {

SimConfig sim_config_from_json(const json& j) {
    SimConfig cfg;
    cfg.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    cfg.theta0 = j.value("theta0", 0.0);
    cfg.eta0 = j.value("eta0", 0.0);
    cfg.eta1 = j.value("eta1", 0.0);
    cfg.eta2 = j.value("eta2", 0.0);
    cfg.sigma2 = j.value("sigma2", 1.0);
    cfg.n = j.value("n", std::int64_t{0});
    cfg.m = j.value("m", std::int64_t{0});
    if (j.contains("design")) cfg.design = j.at("design").get<anova::DesignXi>();
    cfg.xi01 = j.value("xi01", 0.0);
    cfg.xi10 = j.value("xi10", 0.0);
    cfg.xi11 = j.value("xi11", 0.0);
    if (j.contains("bliss")) {
        const json& b = j.at("bliss");
        cfg.bliss_inst = {b.at("m1").get<std::int64_t>(), b.at("m2").get<std::int64_t>(),
                          b.at("eta1").get<double>(), b.at("eta2").get<double>(),
                          b.at("n").get<std::int64_t>()};
        cfg.bliss_alloc = {b.at("n12").get<std::int64_t>(), b.at("n1").get<std::int64_t>(),
                           b.at("n2").get<std::int64_t>(), 0.0};
        cfg.bliss_theta = b.value("theta", -1.0);
    }
    cfg.reps = j.value("reps", std::int64_t{10000});
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.threads = j.value("threads", 0);
    return cfg;
}

json sim_config_to_json(const SimConfig& cfg) {
    json j{{"scenario", to_string(cfg.scenario)}, {"sigma2", cfg.sigma2},
           {"reps", cfg.reps},                    {"seed", cfg.seed}};
    if (cfg.scenario == Scenario::Bliss) {
        j["bliss"] = json{{"m1", cfg.bliss_inst.m1},   {"m2", cfg.bliss_inst.m2},
                          {"eta1", cfg.bliss_inst.eta1_hat},
                          {"eta2", cfg.bliss_inst.eta2_hat},
                          {"n", cfg.bliss_inst.n},     {"n12", cfg.bliss_alloc.n12},
                          {"n1", cfg.bliss_alloc.n1},  {"n2", cfg.bliss_alloc.n2}};
        if (cfg.bliss_theta > 0.0) j["bliss"]["theta"] = cfg.bliss_theta;
    } else {
        j["theta0"] = cfg.theta0;
        j["eta0"] = cfg.eta0;
        j["eta1"] = cfg.eta1;
        j["eta2"] = cfg.eta2;
        j["n"] = cfg.n;
        j["m"] = cfg.m;
        if (cfg.scenario == Scenario::AnovaTypeII) j["design"] = cfg.design;
        if (cfg.scenario == Scenario::AnovaThreeArm) {
            j["xi01"] = cfg.xi01;
            j["xi10"] = cfg.xi10;
            j["xi11"] = cfg.xi11;
        }
    }
    return j;
}

json report_to_json(const McReport& rep, bool include_elapsed) {
    json j{{"empirical_scaled_var", rep.empirical_scaled_var},
           {"asymptotic", rep.asymptotic},
           {"bias", rep.bias},
           {"rel_err", rep.rel_err},
           {"rejection_rate", rep.rejection_rate},
           {"reps_used", rep.reps_used},
           {"theta_mc_se", rep.theta_mc_se}};
    if (rep.max_bc_discrepancy >= 0.0) j["max_bc_discrepancy"] = rep.max_bc_discrepancy;
    if (include_elapsed) j["elapsed_sec"] = rep.elapsed_sec;
    return j;
}

}  // namespace mc

}  // namespace histfuse
