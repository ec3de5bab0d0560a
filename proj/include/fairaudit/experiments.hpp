#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "fairaudit/audit.hpp"
#include "fairaudit/generators.hpp"
#include "fairaudit/knapsack.hpp"
#include "fairaudit/report.hpp"
#include "fairaudit/rules.hpp"

// Desk-scale reproductions of the experiment pipelines: per-rule harm-ratio
// and envy-ratio tables for synthetic goods instances, group-harm-ratio curves
// and utility percentiles for PB elections, shuffle-envy comparisons for
// reviewer assignment. Instances run in a worker pool; results are merged in
// instance order so output is deterministic regardless of thread scheduling.

namespace fairaudit {

inline int worker_count() {
    if (const char* env = std::getenv("FAIRAUDIT_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : static_cast<int>(hw);
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, int workers = worker_count()) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int spawn = std::min<std::size_t>(workers, count);
    for (int w = 0; w < spawn; ++w)
        pool.emplace_back([&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

// Averages that exclude infinite ratios and report the infinite fraction
// separately.
struct RatioAverage {
    double sum = 0.0;
    int finite = 0;
    int infinite = 0;

    void add(double v) {
        if (is_inf(v)) {
            ++infinite;
        } else {
            sum += v;
            ++finite;
        }
    }
    double mean() const { return finite == 0 ? 0.0 : sum / finite; }
    double infinite_fraction() const {
        int total = finite + infinite;
        return total == 0 ? 0.0 : static_cast<double>(infinite) / total;
    }
};

// ---------------------------------------------------------------------------
// Private goods experiment

struct GoodsExperimentConfig {
    std::string model = "uniform";  // uniform | dirichlet
    int n_min = 3;
    int n_max = 8;
    int m_per_n = 3;  // m ranges over [n, m_per_n * n]
    int samples = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> rules = {"egal", "nash", "util", "rr"};
    BnbCaps caps{10, 25};
    bool audit_pf = false;  // ihr + per are the headline metrics
};

struct GoodsExperimentResult {
    std::vector<json> entries;
    // per rule: ihr and per averages over finite instances
    std::map<std::string, RatioAverage> ihr_by_rule;
    std::map<std::string, RatioAverage> per_by_rule;
};

inline GoodsExperimentResult run_goods_experiment(const GoodsExperimentConfig& cfg) {
    struct Task {
        std::string id;
        GoodsInstance inst;
    };
    std::vector<Task> tasks;
    std::uint64_t counter = 0;
    for (int n = cfg.n_min; n <= cfg.n_max; ++n)
        for (int m = n; m <= cfg.m_per_n * n; ++m)
            for (int s = 0; s < cfg.samples; ++s) {
                std::uint64_t seed = cfg.seed * 1000003ull + counter++;
                GoodsInstance inst = cfg.model == "dirichlet"
                                         ? gen_dirichlet_multinomial(n, m, seed)
                                         : gen_uniform_multinomial(n, m, seed);
                tasks.push_back({cfg.model + "_n" + std::to_string(n) + "_m" + std::to_string(m) +
                                     "_s" + std::to_string(s),
                                 std::move(inst)});
            }

    std::vector<std::vector<json>> slots(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t t) {
        const Task& task = tasks[t];
        AuditOptions opt;
        opt.want_ghr = false;
        opt.want_eghr = false;
        opt.want_core = false;
        opt.want_pareto = false;
        opt.want_nw = false;
        opt.want_pf = cfg.audit_pf;
        for (const std::string& rule : cfg.rules) {
            Allocation a;
            SolveStatus status = SolveStatus::Exact;
            if (rule == "egal") {
                GoodsRuleResult r = goods_rule_egal(task.inst, cfg.caps);
                a = std::move(r.outcome);
                status = r.status;
            } else if (rule == "nash") {
                GoodsRuleResult r = goods_rule_nash(task.inst, cfg.caps);
                a = std::move(r.outcome);
                status = r.status;
            } else if (rule == "util") {
                a = util_allocation(task.inst);
            } else if (rule == "rr") {
                a = rr_allocation(task.inst);
            } else {
                throw std::invalid_argument("unknown goods rule " + rule);
            }
            FairnessReport report = audit_goods(task.inst, a, opt);
            double util = utilitarian_welfare(utility_vector(task.inst, a));
            json entry = report_entry(task.id, rule, report, util);
            entry["status"] = to_string(status);
            slots[t].push_back(std::move(entry));
        }
    });

    GoodsExperimentResult out;
    for (auto& chunk : slots)
        for (auto& entry : chunk) {
            const std::string rule = entry["rule"].get<std::string>();
            bool ihr_inf = entry.value("ihr_infinite", false);
            out.ihr_by_rule[rule].add(ihr_inf ? kInf : entry["ihr"].get<double>());
            bool per_inf = entry.value("per_infinite", false);
            out.per_by_rule[rule].add(per_inf ? kInf : entry["per"].get<double>());
            out.entries.push_back(std::move(entry));
        }
    return out;
}

// ---------------------------------------------------------------------------
// Participatory budgeting experiment

struct PBExperimentConfig {
    std::vector<double> fractions = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    PBUtilityModel model = PBUtilityModel::Approval;
    int max_voters = 200;
    std::uint64_t subsample_seed = 7;
    std::vector<std::string> rules = {"global-u", "greedy-u", "nash", "mes", "phragmen"};
    bool appendix_rules = false;  // add pav + smooth-nash
    EnumerationCaps caps;
};

inline PBInstance subsample_voters(const PBInstance& inst, int max_voters, std::uint64_t seed) {
    if (inst.num_voters() <= max_voters) return inst;
    PBInstance out = inst;
    out.ballots.clear();
    Rng rng(seed);
    std::vector<int> order(inst.num_voters());
    std::iota(order.begin(), order.end(), 0);
    for (int k = inst.num_voters() - 1; k > 0; --k)
        std::swap(order[k], order[rng.below(k + 1)]);
    for (int k = 0; k < max_voters; ++k) out.ballots.push_back(inst.ballots[order[k]]);
    return out;
}

struct PBExperimentResult {
    std::vector<json> entries;
    // rule -> fraction index -> average curve value over elections
    std::map<std::string, std::vector<RatioAverage>> curve_by_rule;
    // rule -> percentile (0..100 step 5) of voters' proportional utilities
    std::map<std::string, std::vector<RatioAverage>> percentiles_by_rule;
};

inline PBRuleResult run_pb_rule(const PBInstance& inst, const std::string& rule,
                                const EnumerationCaps& caps) {
    if (rule == "global-u") return pb_global_util(inst);
    if (rule == "greedy-u") return pb_greedy_util(inst);
    if (rule == "nash") return pb_nash(inst, caps);
    if (rule == "mes") return pb_mes(inst);
    if (rule == "phragmen") return pb_phragmen(inst);
    if (rule == "pav") return pb_pav(inst, caps);
    if (rule == "smooth-nash") return pb_smooth_nash(inst, caps);
    throw std::invalid_argument("unknown PB rule " + rule);
}

inline PBExperimentResult run_pb_experiment(
    const std::vector<std::pair<std::string, PBInstance>>& elections,
    const PBExperimentConfig& cfg) {
    std::vector<std::string> rules = cfg.rules;
    if (cfg.appendix_rules) {
        rules.push_back("pav");
        rules.push_back("smooth-nash");
    }
    const int percentile_points = 21;  // 0, 5, ..., 100

    struct Slot {
        std::vector<json> entries;
        std::map<std::string, std::vector<double>> curves;
        std::map<std::string, std::vector<double>> percentiles;
    };
    std::vector<Slot> slots(elections.size());

    parallel_for(elections.size(), [&](std::size_t t) {
        PBInstance inst = subsample_voters(elections[t].second, cfg.max_voters,
                                           cfg.subsample_seed + t);
        inst.utility_model = cfg.model;
        inst.epsilon_floor = PBInstance::default_floor(cfg.model, inst.budget);
        EnumeratedSpace space = enumerate_budget_feasible(inst, cfg.caps);
        OutcomeSpace wrapped = space;

        // per-voter maximum attainable utility, for proportional percentiles
        std::vector<double> peak(inst.num_voters(), 0.0);
        for (int v = 0; v < inst.num_voters(); ++v) {
            std::vector<double> costs, values;
            for (int p : inst.ballots[v]) {
                if (!inst.fundable(p)) continue;
                costs.push_back(inst.projects[p].cost);
                values.push_back(cfg.model == PBUtilityModel::Approval ? 1.0
                                                                       : inst.projects[p].cost);
            }
            peak[v] = costs.empty() ? 0.0 : knapsack_max_value(costs, values, inst.budget).value;
        }

        for (const std::string& rule : rules) {
            PBRuleResult res = run_pb_rule(inst, rule, cfg.caps);
            UtilityVector u = utility_vector(inst, res.outcome);
            AuditOptions opt;
            opt.ghr_fractions = cfg.fractions;
            opt.want_core = false;
            opt.want_eghr = false;
            opt.want_pareto = false;
            opt.want_nw = false;
            opt.want_ihr = false;  // citywide IHR is tiny by construction; GHR is the metric
            FairnessReport report = audit_space(wrapped, u, opt);
            slots[t].entries.push_back(
                report_entry(elections[t].first, rule, report, utilitarian_welfare(u)));
            slots[t].curves[rule] = report.ghr_values;

            std::vector<double> prop(inst.num_voters(), 1.0);
            for (int v = 0; v < inst.num_voters(); ++v)
                if (peak[v] > 0) prop[v] = std::min(1.0, u[v] / peak[v]);
            std::sort(prop.begin(), prop.end());
            std::vector<double> pct(percentile_points, 0.0);
            for (int k = 0; k < percentile_points; ++k) {
                double pos = (static_cast<double>(k) / (percentile_points - 1)) *
                             (prop.size() - 1);
                pct[k] = prop[static_cast<std::size_t>(pos + 0.5)];
            }
            slots[t].percentiles[rule] = pct;
        }
    });

    PBExperimentResult out;
    for (auto& slot : slots) {
        for (auto& e : slot.entries) out.entries.push_back(std::move(e));
        for (auto& [rule, curve] : slot.curves) {
            auto& agg = out.curve_by_rule[rule];
            agg.resize(cfg.fractions.size());
            for (std::size_t k = 0; k < curve.size(); ++k) agg[k].add(curve[k]);
        }
        for (auto& [rule, pct] : slot.percentiles) {
            auto& agg = out.percentiles_by_rule[rule];
            agg.resize(pct.size());
            for (std::size_t k = 0; k < pct.size(); ++k) agg[k].add(pct[k]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Peer review experiment

struct ReviewExperimentConfig {
    int n = 10;
    int load = 3;
    int samples = 10;
    std::uint64_t seed = 3;
    int exact_limit = 6;
};

struct ReviewExperimentResult {
    std::vector<json> entries;
    std::map<std::string, RatioAverage> shuffle_by_rule;
};

inline ReviewExperimentResult run_review_experiment(const ReviewExperimentConfig& cfg) {
    std::vector<ReviewInstance> instances;
    for (int s = 0; s < cfg.samples; ++s)
        instances.push_back(gen_review_similarity(cfg.n, cfg.seed * 7919 + s, cfg.load));
    std::vector<std::vector<json>> slots(instances.size());
    parallel_for(instances.size(), [&](std::size_t t) {
        const ReviewInstance& inst = instances[t];
        for (const auto& res : review_rules(inst, cfg.exact_limit)) {
            UtilityVector u = utility_vector(inst, res.outcome);
            double shuffle = shuffle_envy_ratio(inst, res.outcome);
            json j;
            j["instance"] = "review_s" + std::to_string(t);
            j["rule"] = res.rule;
            j["shuffle_envy_ratio"] = shuffle;
            j["util"] = utilitarian_welfare(u);
            j["nw"] = nash_welfare(u);
            j["min_utility"] = egalitarian_welfare(u);
            j["status"] = to_string(res.status);
            slots[t].push_back(std::move(j));
        }
    });
    ReviewExperimentResult out;
    for (auto& chunk : slots)
        for (auto& e : chunk) {
            out.shuffle_by_rule[e["rule"].get<std::string>()].add(
                e["shuffle_envy_ratio"].get<double>());
            out.entries.push_back(std::move(e));
        }
    return out;
}

}  // namespace fairaudit
