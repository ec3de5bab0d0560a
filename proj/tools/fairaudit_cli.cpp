// Batch driver: generate synthetic instances, run decision rules, audit
// fairness criteria, and reproduce the experiment pipelines at desk scale.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fairaudit/audit.hpp"
#include "fairaudit/csv_io.hpp"
#include "fairaudit/experiments.hpp"
#include "fairaudit/fixtures.hpp"
#include "fairaudit/generators.hpp"
#include "fairaudit/pabulib.hpp"
#include "fairaudit/report.hpp"
#include "fairaudit/rules.hpp"

namespace fs = std::filesystem;
using namespace fairaudit;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

PBUtilityModel parse_model(const std::string& name) {
    if (name == "approval") return PBUtilityModel::Approval;
    if (name == "cost") return PBUtilityModel::Cost;
    throw std::runtime_error("unknown utility model '" + name + "' (approval|cost)");
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(const std::string& model, int n, int m, int samples, std::uint64_t seed,
                 const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (int s = 0; s < samples; ++s) {
        GoodsInstance inst = model == "dirichlet"
                                 ? gen_dirichlet_multinomial(n, m, seed + s)
                                 : gen_uniform_multinomial(n, m, seed + s);
        std::string name = model + "_n" + std::to_string(n) + "_m" + std::to_string(m) + "_s" +
                           std::to_string(s) + ".csv";
        write_file((fs::path(out_dir) / name).string(), serialize_goods_csv(inst));
    }
    std::cout << "wrote " << samples << " instances to " << out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const std::string& domain, const std::string& rule, const std::string& in_path,
              const std::string& out_path, bool divisible, const std::string& utility_model,
              int load) {
    json out;
    out["rule"] = rule;
    if (domain == "goods") {
        GoodsInstance inst = parse_goods_csv(read_file(in_path), divisible).instance;
        GoodsRuleResult res;
        if (rule == "egal")
            res = {"egal", branch_and_bound_allocation(inst, AllocObjective::Egalitarian), 0.0,
                   SolveStatus::Exact, 0.0};
        else if (rule == "nash")
            res = {"nash", branch_and_bound_allocation(inst, AllocObjective::Nash), 0.0,
                   SolveStatus::Exact, 0.0};
        else if (rule == "util")
            res = {"util", util_allocation(inst), 0.0, SolveStatus::Exact, 0.0};
        else if (rule == "rr")
            res = {"rr", rr_allocation(inst), 0.0, SolveStatus::Exact, 0.0};
        else if (rule == "leximin")
            res = {"leximin", leximin_allocation(inst), 0.0, SolveStatus::Exact, 0.0};
        else
            throw std::runtime_error("unknown goods rule '" + rule +
                                     "' (egal|nash|util|rr|leximin)");
        out["domain"] = "goods";
        out["shares"] = res.outcome.share;
        out["utilities"] = utility_vector(inst, res.outcome);
        out["status"] = to_string(res.status);
    } else if (domain == "pb") {
        PBInstance inst = parse_pabulib(read_file(in_path), parse_model(utility_model));
        PBRuleResult res = run_pb_rule(inst, rule, {});
        out["domain"] = "pb";
        json funded = json::array();
        for (int p : res.outcome.funded) funded.push_back(inst.projects[p].id);
        out["funded"] = funded;
        out["total_cost"] = res.outcome.total_cost(inst);
        out["status"] = to_string(res.status);
        out["utility_model"] = utility_model;
    } else if (domain == "review") {
        ReviewInstance inst = parse_similarity_csv(read_file(in_path), load);
        ReviewRuleResult res;
        if (rule == "tpms")
            res = review_tpms(inst);
        else if (rule == "nash")
            res = review_nash(inst);
        else if (rule == "leximin")
            res = review_leximin(inst);
        else if (rule == "rr")
            res = review_rr(inst);
        else
            throw std::runtime_error("unknown review rule '" + rule + "' (tpms|nash|leximin|rr)");
        out["domain"] = "review";
        out["assigned"] = res.outcome.assigned;
        out["utilities"] = utility_vector(inst, res.outcome);
        out["status"] = to_string(res.status);
    } else {
        throw std::runtime_error("unknown domain '" + domain + "' (goods|pb|review)");
    }
    write_file(out_path, out.dump(2) + "\n");
    std::cout << "solved " << domain << "/" << rule << " -> " << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// audit

AuditOptions audit_options_from(const std::string& criteria, const std::vector<double>& fracs) {
    AuditOptions opt;
    if (!criteria.empty() && criteria != "all") {
        opt.want_ihr = opt.want_ghr = opt.want_eghr = opt.want_pf = false;
        opt.want_core = opt.want_prop = opt.want_pareto = opt.want_nw = false;
        std::stringstream ss(criteria);
        std::string token;
        while (std::getline(ss, token, ',')) {
            if (token == "ihr")
                opt.want_ihr = true;
            else if (token == "ghr")
                opt.want_ghr = true;
            else if (token == "eghr")
                opt.want_eghr = true;
            else if (token == "pf")
                opt.want_pf = true;
            else if (token == "core")
                opt.want_core = true;
            else if (token == "prop")
                opt.want_prop = true;
            else if (token == "po")
                opt.want_pareto = true;
            else if (token == "nw")
                opt.want_nw = true;
            else if (token == "envy")
                ;  // goods audits always carry the envy metrics
            else
                throw std::runtime_error("unknown criterion '" + token +
                                         "' (ihr,ghr,eghr,pf,core,prop,po,nw,envy)");
        }
    }
    if (!fracs.empty()) opt.ghr_fractions = fracs;
    return opt;
}

int cmd_audit(const std::vector<std::string>& in_paths, const std::string& outcome_path,
              const std::string& criteria, const std::vector<double>& fracs,
              const std::string& utility_model, const std::string& out_path) {
    AuditOptions opt = audit_options_from(criteria, fracs);
    json outcome = json::parse(read_file(outcome_path));
    std::string domain = outcome.value("domain", "goods");
    std::vector<json> entries;
    std::vector<std::string> failures;
    for (const std::string& in_path : in_paths) {
        try {
            if (domain == "goods") {
                bool divisible = false;
                if (outcome.contains("shares"))
                    for (const auto& row : outcome["shares"])
                        for (const auto& cell : row) {
                            double v = cell.get<double>();
                            if (v > 1e-9 && v < 1 - 1e-9) divisible = true;
                        }
                GoodsInstance inst = parse_goods_csv(read_file(in_path), divisible).instance;
                Allocation a;
                a.share = outcome["shares"].get<std::vector<std::vector<double>>>();
                FairnessReport report = audit_goods(inst, a, opt);
                double util = utilitarian_welfare(utility_vector(inst, a));
                entries.push_back(
                    report_entry(in_path, outcome.value("rule", "given"), report, util));
            } else if (domain == "pb") {
                PBInstance inst = parse_pabulib(read_file(in_path), parse_model(utility_model));
                BudgetSelection sel;
                for (const auto& id : outcome["funded"]) {
                    bool found = false;
                    for (int p = 0; p < inst.num_projects(); ++p)
                        if (inst.projects[p].id == id.get<std::string>()) {
                            sel.funded.push_back(p);
                            found = true;
                        }
                    if (!found)
                        throw std::runtime_error("outcome funds unknown project " +
                                                 id.get<std::string>());
                }
                std::sort(sel.funded.begin(), sel.funded.end());
                FairnessReport report = audit_pb(inst, sel, opt);
                double util = utilitarian_welfare(utility_vector(inst, sel));
                entries.push_back(
                    report_entry(in_path, outcome.value("rule", "given"), report, util));
            } else if (domain == "review") {
                ReviewInstance inst = parse_similarity_csv(read_file(in_path));
                ReviewAssignment a;
                a.assigned = outcome["assigned"].get<std::vector<std::vector<int>>>();
                UtilityVector u = utility_vector(inst, a);
                json j;
                j["instance"] = in_path;
                j["rule"] = outcome.value("rule", "given");
                j["shuffle_envy_ratio"] = shuffle_envy_ratio(inst, a);
                j["util"] = utilitarian_welfare(u);
                j["nw"] = nash_welfare(u);
                entries.push_back(std::move(j));
            } else {
                throw std::runtime_error("unknown domain in outcome file: " + domain);
            }
        } catch (const ScaleCapError& e) {
            failures.push_back(in_path + ": " + std::string(e.what()) +
                               " (shrink the instance or drop the capped criteria)");
        } catch (const std::exception& e) {
            failures.push_back(in_path + ": " + e.what());
        }
    }
    json out;
    out["reports"] = entries;
    if (!failures.empty()) out["failures"] = failures;
    write_file(out_path, out.dump(2) + "\n");
    for (const std::string& f : failures) std::cerr << "audit failed: " << f << "\n";
    std::cout << "audited " << entries.size() << "/" << in_paths.size() << " instances -> "
              << out_path << "\n";
    return failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// experiment presets

int cmd_experiment(const std::string& preset, const std::string& data_dir,
                   const std::string& out_dir, int samples, std::uint64_t seed, int n_max) {
    fs::create_directories(out_dir);
    if (preset == "goods-fig2") {
        json aggregate = json::array();
        std::vector<json> all_entries;
        for (const std::string model : {"uniform", "dirichlet"}) {
            GoodsExperimentConfig cfg;
            cfg.model = model;
            cfg.samples = samples;
            cfg.seed = seed;
            cfg.n_max = n_max;
            GoodsExperimentResult res = run_goods_experiment(cfg);
            for (auto& [rule, avg] : res.ihr_by_rule) {
                json row;
                row["model"] = model;
                row["rule"] = rule;
                row["avg_ihr"] = avg.mean();
                row["ihr_infinite_fraction"] = avg.infinite_fraction();
                row["avg_per"] = res.per_by_rule[rule].mean();
                row["per_infinite_fraction"] = res.per_by_rule[rule].infinite_fraction();
                aggregate.push_back(row);
            }
            for (auto& e : res.entries) all_entries.push_back(std::move(e));
        }
        write_file((fs::path(out_dir) / "goods_fig2_entries.json").string(),
                   json(all_entries).dump(2) + "\n");
        write_file((fs::path(out_dir) / "goods_fig2_entries.csv").string(),
                   reports_to_csv(all_entries));
        std::string csv = "model,rule,avg_ihr,ihr_infinite_fraction,avg_per,per_infinite_fraction\n";
        for (const auto& row : aggregate) {
            std::ostringstream line;
            line << row["model"].get<std::string>() << "," << row["rule"].get<std::string>() << ","
                 << row["avg_ihr"].get<double>() << "," << row["ihr_infinite_fraction"].get<double>()
                 << "," << row["avg_per"].get<double>() << ","
                 << row["per_infinite_fraction"].get<double>() << "\n";
            csv += line.str();
        }
        write_file((fs::path(out_dir) / "goods_fig2_aggregate.csv").string(), csv);
        std::cout << "goods-fig2 done: " << all_entries.size() << " entries\n";
        return 0;
    }
    if (preset == "pb-fig4") {
        std::vector<std::pair<std::string, PBInstance>> elections;
        std::vector<std::string> skipped;
        const int audit_project_cap = 14;  // tractability cutoff for subset enumeration
        for (const auto& entry : fs::directory_iterator(data_dir)) {
            if (entry.path().extension() != ".pb") continue;
            PBInstance inst = parse_pabulib(read_file(entry.path().string()));
            if (inst.num_projects() > audit_project_cap) {
                skipped.push_back(entry.path().filename().string());
                continue;
            }
            elections.emplace_back(entry.path().stem().string(), std::move(inst));
        }
        std::sort(elections.begin(), elections.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (elections.empty()) throw std::runtime_error("no usable .pb elections in " + data_dir);
        std::vector<json> all_entries;
        std::string curve_csv = "model,rule,min_frac,avg_ghr\n";
        std::string pct_csv = "model,rule,percentile,avg_proportional_utility\n";
        for (const auto model : {PBUtilityModel::Approval, PBUtilityModel::Cost}) {
            PBExperimentConfig cfg;
            cfg.model = model;
            cfg.subsample_seed = seed;
            cfg.appendix_rules = model == PBUtilityModel::Approval;
            PBExperimentResult res = run_pb_experiment(elections, cfg);
            std::string mname = model == PBUtilityModel::Approval ? "approval" : "cost";
            for (auto& [rule, curve] : res.curve_by_rule)
                for (std::size_t k = 0; k < curve.size(); ++k) {
                    std::ostringstream line;
                    line << mname << "," << rule << "," << cfg.fractions[k] << ","
                         << curve[k].mean() << "\n";
                    curve_csv += line.str();
                }
            for (auto& [rule, pct] : res.percentiles_by_rule)
                for (std::size_t k = 0; k < pct.size(); ++k) {
                    std::ostringstream line;
                    line << mname << "," << rule << "," << 5 * k << "," << pct[k].mean() << "\n";
                    pct_csv += line.str();
                }
            for (auto& e : res.entries) {
                e["model"] = mname;
                all_entries.push_back(std::move(e));
            }
        }
        write_file((fs::path(out_dir) / "pb_fig4_entries.json").string(),
                   json(all_entries).dump(2) + "\n");
        write_file((fs::path(out_dir) / "pb_fig4_curves.csv").string(), curve_csv);
        write_file((fs::path(out_dir) / "pb_fig5_percentiles.csv").string(), pct_csv);
        for (const std::string& s : skipped)
            std::cout << "skipped " << s << " (more than " << audit_project_cap
                      << " projects; subset enumeration would not fit)\n";
        std::cout << "pb-fig4 done: " << elections.size() << " elections\n";
        return 0;
    }
    if (preset == "review-fig3") {
        ReviewExperimentConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        ReviewExperimentResult res = run_review_experiment(cfg);
        write_file((fs::path(out_dir) / "review_fig3_entries.json").string(),
                   json(res.entries).dump(2) + "\n");
        std::string csv = "rule,avg_shuffle_envy_ratio\n";
        for (auto& [rule, avg] : res.shuffle_by_rule) {
            std::ostringstream line;
            line << rule << "," << avg.mean() << "\n";
            csv += line.str();
        }
        write_file((fs::path(out_dir) / "review_fig3_aggregate.csv").string(), csv);
        std::cout << "review-fig3 done: " << res.entries.size() << " entries\n";
        return 0;
    }
    throw std::runtime_error("unknown preset '" + preset +
                             "' (goods-fig2|pb-fig4|review-fig3)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairness auditing for collective decisions"};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "write synthetic goods instances as CSV");
    std::string gen_model = "uniform", gen_out = "generated";
    int gen_n = 4, gen_m = 8, gen_samples = 10;
    std::uint64_t gen_seed = 1;
    generate->add_option("--model", gen_model, "uniform|dirichlet");
    generate->add_option("--n", gen_n, "agents");
    generate->add_option("--m", gen_m, "goods");
    generate->add_option("--samples", gen_samples, "instances to generate");
    generate->add_option("--seed", gen_seed, "base seed");
    generate->add_option("--out", gen_out, "output directory")->required();

    auto* solve = app.add_subcommand("solve", "run one decision rule on one instance");
    std::string solve_domain, solve_rule, solve_in, solve_out, solve_model = "approval";
    bool solve_divisible = false;
    int solve_load = 3;
    solve->add_option("--domain", solve_domain, "goods|pb|review")->required();
    solve->add_option("--rule", solve_rule, "rule name")->required();
    solve->add_option("--in", solve_in, "instance file (.csv or .pb)")->required();
    solve->add_option("--out", solve_out, "outcome JSON path")->required();
    solve->add_flag("--divisible", solve_divisible, "treat goods as divisible");
    solve->add_option("--utility-model", solve_model, "approval|cost (PB only)");
    solve->add_option("--load", solve_load, "review load (default 3)");

    auto* audit = app.add_subcommand("audit", "audit an outcome against its instance");
    std::vector<std::string> audit_in;
    std::string audit_outcome, audit_criteria = "all", audit_out = "report.json";
    std::string audit_model = "approval";
    std::vector<double> audit_fracs;
    audit->add_option("--in", audit_in, "instance file(s)")->required();
    audit->add_option("--outcome", audit_outcome, "outcome JSON from solve")->required();
    audit->add_option("--criteria", audit_criteria, "comma list: ihr,ghr,eghr,pf,core,prop,po,nw");
    audit->add_option("--min-group-frac", audit_fracs, "GHR curve fractions");
    audit->add_option("--utility-model", audit_model, "approval|cost (PB only)");
    audit->add_option("--out", audit_out, "report JSON path");

    auto* experiment = app.add_subcommand("experiment", "reproduce a figure pipeline at desk scale");
    std::string exp_preset, exp_data = "data/pb", exp_out = "experiments";
    int exp_samples = 10, exp_n_max = 8;
    std::uint64_t exp_seed = 1;
    experiment->add_option("--preset", exp_preset, "goods-fig2|pb-fig4|review-fig3")->required();
    experiment->add_option("--data", exp_data, "input data directory (pb preset)");
    experiment->add_option("--out", exp_out, "output directory");
    experiment->add_option("--samples", exp_samples, "samples per configuration");
    experiment->add_option("--seed", exp_seed, "base seed");
    experiment->add_option("--n-max", exp_n_max, "largest agent count (goods preset)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed())
            return cmd_generate(gen_model, gen_n, gen_m, gen_samples, gen_seed, gen_out);
        if (solve->parsed())
            return cmd_solve(solve_domain, solve_rule, solve_in, solve_out, solve_divisible,
                             solve_model, solve_load);
        if (audit->parsed())
            return cmd_audit(audit_in, audit_outcome, audit_criteria, audit_fracs, audit_model,
                             audit_out);
        if (experiment->parsed())
            return cmd_experiment(exp_preset, exp_data, exp_out, exp_samples, exp_seed, exp_n_max);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
