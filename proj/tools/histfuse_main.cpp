// histfuse command-line interface: estimator fusion with historical studies,
// asymptotic variance constructions and their Loewner comparisons, the
// factorial and drug-interaction design searches, and the Monte Carlo
// validation harness. JSON in, JSON or CSV out.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "histfuse/anova.hpp"
#include "histfuse/asymvar.hpp"
#include "histfuse/bliss.hpp"
#include "histfuse/fusion.hpp"
#include "histfuse/json_io.hpp"
#include "histfuse/mc.hpp"

namespace {

using nlohmann::json;
using namespace histfuse;

json read_input(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path);
        if (!in)
            throw DomainError("ParseError", "cannot open input file").with("path", path);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError("ParseError", std::string("invalid JSON input: ") + e.what());
    }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json with_schema(json j) {
    j["schema"] = kSchema;
    return j;
}

std::vector<std::int64_t> parse_size_list(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        // accept simple fractions like 1/8
        const auto slash = item.find('/');
        if (slash != std::string::npos)
            out.push_back(std::stod(item.substr(0, slash)) / std::stod(item.substr(slash + 1)));
        else
            out.push_back(std::stod(item));
    }
    return out;
}

struct CommonOpts {
    std::string input_path;
    std::string format = "json";
    int threads = 0;
};

void run_combine(const CommonOpts& opt) {
    const json in = read_input(opt.input_path.empty() ? "-" : opt.input_path);
    const HistoricalSet hist = historical_from_json(in.at("historical"));
    if (in.contains("joint")) {
        const JointEstimate joint = in.at("joint").get<JointEstimate>();
        const JointEstimate fused = combine_theta_C(joint, hist);
        emit(with_schema(json{{"theta_bar", fused.theta},
                              {"eta_bar", fused.eta},
                              {"variance", fused.upsilon},
                              {"n", fused.n}}));
        return;
    }
    const Estimate current = in.at("current").get<Estimate>();
    const Estimate fused = combine_eta(current, hist);
    emit(with_schema(json{{"eta_bar", fused.value},
                          {"scaled_var", fused.scaled_var},
                          {"n", fused.n}}));
}

void run_variance(const std::string& kind, const CommonOpts& opt) {
    const json in = read_input(opt.input_path.empty() ? "-" : opt.input_path);
    VarianceBlocks blocks;
    if (kind == "A" || kind == "B") {
        const ProblemSpec spec = problem_spec_from_json(in);
        blocks = kind == "A" ? variance_A(spec) : variance_B(spec);
    } else if (kind == "C") {
        blocks = variance_C(in.at("upsilon").get<VarianceBlocks>(),
                            in.at("sigma").get<la::SymMatrix>(), in.at("rho").get<double>());
    } else {
        throw CLI::ValidationError("--kind must be A, B or C");
    }
    json out{{"kind", kind}, {"blocks", blocks}, {"assembled", blocks.assemble()}};
    if (blocks.p() == 1) out[kind + "_thetatheta"] = blocks.tt(0, 0);
    emit(with_schema(std::move(out)));
}

void run_compare(const CommonOpts& opt) {
    const json in = read_input(opt.input_path.empty() ? "-" : opt.input_path);
    const VarianceBlocks upsilon = in.at("upsilon").get<VarianceBlocks>();
    ProblemSpec spec = problem_spec_from_json(in);
    if (!spec.upsilon_ee) spec.upsilon_ee = upsilon.ee;
    const double tol = in.value("tol", 1e-9);
    const VarianceBlocks a = variance_A(spec);
    const VarianceBlocks b = variance_B(spec);
    const VarianceBlocks c = variance_C(upsilon, spec.sigma, spec.rho);
    const HierarchyReport rep = compare_hierarchy(a, b, c, upsilon, tol);
    emit(with_schema(json{{"report", rep}, {"A", a}, {"B", b}, {"C", c}}));
}

void run_table1(const std::string& sizes_n, const std::string& sizes_m, double sigma2,
                const CommonOpts& opt) {
    const auto rows =
        anova::emit_table1(parse_size_list(sizes_m), parse_size_list(sizes_n), sigma2);
    if (opt.format == "csv") {
        std::cout << anova::table1_csv(rows);
        return;
    }
    emit(with_schema(json{{"rows", rows}}));
}

void run_table2(const std::string& rhos, double step, double floor00, const CommonOpts& opt) {
    const auto rows = anova::emit_table2(parse_double_list(rhos), step, floor00, opt.threads);
    if (opt.format == "csv") {
        std::cout << anova::table2_csv(rows);
        return;
    }
    emit(with_schema(json{{"rows", rows}}));
}

void run_anova_design(double rho, double step, double floor00, const CommonOpts& opt) {
    const anova::OptimalDesign od = anova::optimal_design(rho, step, floor00, opt.threads);
    emit(with_schema(json{{"rho", rho}, {"design", od}}));
}

void run_bliss_design(std::int64_t m1, std::int64_t m2, double eta1, double eta2,
                      std::int64_t n, double theta) {
    const bliss::BlissInstance inst{m1, m2, eta1, eta2, n};
    const bliss::Allocation alloc =
        theta > 0.0 ? bliss::greedy_allocate(inst, theta) : bliss::greedy_allocate(inst);
    emit(with_schema(json(alloc)));
}

void run_table3(const CommonOpts& opt) {
    const auto rows = bliss::emit_table3(bliss::default_grid());
    if (opt.format == "csv") {
        std::cout << bliss::table3_csv(rows);
        return;
    }
    emit(with_schema(json{{"rows", rows}}));
}

void run_simulate(const CommonOpts& opt, bool timing) {
    const json in = read_input(opt.input_path.empty() ? "-" : opt.input_path);
    mc::SimConfig cfg = mc::sim_config_from_json(in);
    if (opt.threads > 0) cfg.threads = opt.threads;
    const mc::McReport rep = cfg.scenario == mc::Scenario::Bliss ? mc::simulate_bliss(cfg)
                                                                 : mc::simulate_anova(cfg);
    json out{{"scenario", mc::to_string(cfg.scenario)},
             {"config", mc::sim_config_to_json(cfg)},
             {"report", mc::report_to_json(rep, timing)}};
    emit(with_schema(std::move(out)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"histfuse: principled use of historical parameter estimates"};
    app.require_subcommand(1);

    CommonOpts opt;
    app.add_option("--threads", opt.threads, "worker threads (0 = hardware default)")
        ->envname("HISTFUSE_THREADS");

    std::string kind = "A";
    auto* combine = app.add_subcommand("combine", "fuse current and historical estimates");
    combine->add_option("--input", opt.input_path, "input JSON path or '-' for stdin");

    auto* variance = app.add_subcommand("variance", "asymptotic variance blocks");
    variance->add_option("--kind", kind, "A (plug-in), B (re-estimation), C (summary fusion)");
    variance->add_option("--spec", opt.input_path, "input JSON path or '-'");

    auto* compare = app.add_subcommand("compare", "Loewner dominance report");
    compare->add_option("--spec", opt.input_path, "input JSON path or '-'");

    std::string sizes = "100,200,500,1000,2000,5000";
    std::string sizes_m = sizes;
    double sigma2 = 1.0;
    auto* table1 = app.add_subcommand("anova-table1", "plug-in vs re-estimation variance grid");
    table1->add_option("--n-list", sizes, "comma-separated current sizes");
    table1->add_option("--m-list", sizes_m, "comma-separated historical sizes");
    table1->add_option("--sigma2", sigma2, "residual variance");
    table1->add_option("--format", opt.format, "json or csv");

    std::string rhos = "1/8,1/4,1/2,1,2,4,8";
    double step = 0.001;
    double floor00 = 0.02;
    auto* table2 = app.add_subcommand("anova-table2", "optimal designs over sampling ratios");
    table2->add_option("--rhos", rhos, "comma-separated ratios (fractions allowed)");
    table2->add_option("--step", step, "grid step");
    table2->add_option("--xi00-floor", floor00, "lower bound for the control cell");
    table2->add_option("--format", opt.format, "json or csv");

    double rho = 1.0;
    auto* adesign = app.add_subcommand("anova-design", "optimal design for one sampling ratio");
    adesign->add_option("--rho", rho, "sampling ratio n/m")->required();
    adesign->add_option("--step", step, "grid step");
    adesign->add_option("--xi00-floor", floor00, "lower bound for the control cell");

    std::int64_t m1 = 0, m2 = 0, nb = 0;
    double eta1 = 0.0, eta2 = 0.0, theta = -1.0;
    auto* bdesign = app.add_subcommand("bliss-design", "greedy interaction-study allocation");
    bdesign->add_option("--m1", m1, "historical size, drug 1")->required();
    bdesign->add_option("--m2", m2, "historical size, drug 2")->required();
    bdesign->add_option("--eta1", eta1, "no-effect probability, drug 1")->required();
    bdesign->add_option("--eta2", eta2, "no-effect probability, drug 2")->required();
    bdesign->add_option("--n", nb, "current budget")->required();
    bdesign->add_option("--theta", theta, "override the independence plug-in");

    auto* table3 = app.add_subcommand("bliss-table3", "minimal top-up budgets over the grid");
    table3->add_option("--format", opt.format, "json or csv");

    bool timing = false;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo validation run");
    simulate->add_option("--config", opt.input_path, "input JSON path or '-'");
    simulate->add_flag("--timing", timing, "include elapsed time in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(combine)) run_combine(opt);
        else if (app.got_subcommand(variance)) run_variance(kind, opt);
        else if (app.got_subcommand(compare)) run_compare(opt);
        else if (app.got_subcommand(table1)) run_table1(sizes, sizes_m, sigma2, opt);
        else if (app.got_subcommand(table2)) run_table2(rhos, step, floor00, opt);
        else if (app.got_subcommand(adesign)) run_anova_design(rho, step, floor00, opt);
        else if (app.got_subcommand(bdesign)) run_bliss_design(m1, m2, eta1, eta2, nb, theta);
        else if (app.got_subcommand(table3)) run_table3(opt);
        else if (app.got_subcommand(simulate)) run_simulate(opt, timing);
    } catch (const DomainError& e) {
        nlohmann::json err{{"code", e.code()}, {"message", e.what()}, {"context", e.context()}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const CLI::Error&) {
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json err{{"code", "Internal"}, {"message", e.what()}, {"context", nullptr}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
