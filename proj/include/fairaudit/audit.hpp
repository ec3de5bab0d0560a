#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairaudit/criteria.hpp"
#include "fairaudit/model.hpp"
#include "fairaudit/outcome_space.hpp"

// Assembles the per-outcome fairness report: harm ratios with witnesses, PF,
// core/proportionality/Pareto flags, envy metrics, Nash welfare ratio. Which
// pieces run depends on the backend (implicit goods spaces answer pairwise
// floor queries but not group scans) and on the exhaustive-scan agent caps.

namespace fairaudit {

struct AuditOptions {
    std::vector<double> ghr_fractions = {0.0, 0.25, 0.5, 0.75};
    bool want_ihr = true;
    bool want_ghr = true;
    bool want_eghr = false;  // exhaustive; off by default
    bool want_pf = true;
    bool want_core = true;
    bool want_prop = true;
    bool want_pareto = true;
    bool want_nw = true;
    int exhaustive_cap = 12;
};

struct FairnessReport {
    std::optional<double> ihr;
    std::optional<HarmWitness> ihr_witness;
    std::vector<double> ghr_fractions;
    std::vector<double> ghr_values;
    std::vector<std::optional<HarmWitness>> ghr_witnesses;
    // how the curve was computed: the large-n sort construction, or one
    // max-min LP per group pair on polytopes
    std::string ghr_method;
    bool ghr_strict_violation_at_one = false;
    std::optional<double> eghr_value;
    std::optional<double> pf;
    std::optional<bool> core_ok;
    std::optional<double> prop;
    std::optional<bool> pareto_ok;
    std::optional<double> per;  // private goods only
    std::optional<bool> envy_free;
    double nw = 0.0;
    std::optional<double> nw_vs_max;

    bool ihr_infinite() const { return ihr && is_inf(*ihr); }
    bool per_infinite() const { return per && is_inf(*per); }
    bool pf_infinite() const { return pf && is_inf(*pf); }
};

inline FairnessReport audit_space(const OutcomeSpace& space, const UtilityVector& current,
                                  const AuditOptions& opt = {}) {
    FairnessReport report;
    const int n = static_cast<int>(current.size());
    report.nw = nash_welfare(current);
    const bool enumerated = std::holds_alternative<EnumeratedSpace>(space);
    const bool polytope = std::holds_alternative<PolytopeSpace>(space);

    if (opt.want_ihr) {
        IhrResult res = ihr(space, current);
        report.ihr = res.value;
        report.ihr_witness = res.witness;
    }
    if (opt.want_ghr && (enumerated || (polytope && n <= opt.exhaustive_cap))) {
        report.ghr_method = enumerated ? "sort-construction" : "pair-lp";
        if (enumerated) {
            const auto& en = std::get<EnumeratedSpace>(space);
            GhrScanner scanner(en, current);
            for (double f : opt.ghr_fractions) {
                GhrResult res = scanner.at_fraction(f);
                report.ghr_fractions.push_back(f);
                report.ghr_values.push_back(res.value);
                report.ghr_witnesses.push_back(res.witness);
                report.ghr_strict_violation_at_one |= res.strict_violation_at_one;
            }
        } else {
            for (double f : opt.ghr_fractions) {
                GhrResult res = ghr(std::get<PolytopeSpace>(space), current, f,
                                    opt.exhaustive_cap);
                report.ghr_fractions.push_back(f);
                report.ghr_values.push_back(res.value);
                report.ghr_witnesses.push_back(res.witness);
                report.ghr_strict_violation_at_one |= res.strict_violation_at_one;
            }
        }
    }
    if (opt.want_eghr && enumerated && n <= opt.exhaustive_cap)
        report.eghr_value = eghr(std::get<EnumeratedSpace>(space), current, opt.exhaustive_cap);
    if (opt.want_pf) report.pf = pf_value(space, current);
    if (opt.want_core && (enumerated || polytope) && n <= opt.exhaustive_cap)
        report.core_ok = core_check(space, current, opt.exhaustive_cap).ok;
    if (opt.want_prop) report.prop = prop_ratio(space, current);
    if (opt.want_pareto) report.pareto_ok = pareto_check(space, current).ok;
    if (opt.want_nw) report.nw_vs_max = nw_ratio(space, current);
    return report;
}

struct GoodsAuditCaps {
    EnumerationCaps enumeration;
    // fall back to the implicit branch-and-bound backend past this point
    double enumerate_up_to = 2e5;
};

inline FairnessReport audit_goods(const GoodsInstance& inst, const Allocation& a,
                                  AuditOptions opt = {}, const GoodsAuditCaps& caps = {}) {
    UtilityVector current = utility_vector(inst, a);
    FairnessReport report;
    if (inst.divisible) {
        OutcomeSpace space = fractional_goods_polytope(inst);
        report = audit_space(space, current, opt);
    } else if (std::pow(static_cast<double>(inst.n), inst.m) <= caps.enumerate_up_to) {
        OutcomeSpace space = enumerate_allocations(inst, caps.enumeration);
        report = audit_space(space, current, opt);
    } else {
        opt.want_ghr = false;   // group scans need an explicit outcome list
        opt.want_eghr = false;
        opt.want_core = false;
        bool want_ihr = opt.want_ihr;
        opt.want_ihr = false;
        OutcomeSpace space = GoodsExactSpace{inst};
        report = audit_space(space, current, opt);
        if (want_ihr) {
            IhrResult res = ihr_goods(inst, a);  // seeded by the audited allocation
            report.ihr = res.value;
            report.ihr_witness = res.witness;
        }
    }
    report.per = private_envy_ratio(inst, a);
    report.envy_free = envy_free_check(inst, a).ok;
    return report;
}

inline FairnessReport audit_pb(const PBInstance& inst, const BudgetSelection& sel,
                               const AuditOptions& opt = {},
                               const EnumerationCaps& caps = {}) {
    UtilityVector current = utility_vector(inst, sel);
    OutcomeSpace space = enumerate_budget_feasible(inst, caps);
    return audit_space(space, current, opt);
}

}  // namespace fairaudit
