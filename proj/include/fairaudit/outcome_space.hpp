#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fairaudit/alloc_search.hpp"
#include "fairaudit/common.hpp"
#include "fairaudit/model.hpp"
#include "fairaudit/simplex.hpp"

// A uniform view of "the set of alternative outcomes" that the criteria
// engine queries. Three backends: exact finite enumeration, linear-constraint
// polytopes (one LP per query), and implicit indivisible-goods spaces audited
// by branch and bound (enumeration is hopeless already at n=8, m=24).

namespace fairaudit {

struct EnumeratedOutcome {
    std::string label;
    UtilityVector u;
    std::uint64_t payload = 0;
};

struct EnumeratedSpace {
    std::vector<EnumeratedOutcome> outcomes;

    int agents() const { return outcomes.empty() ? 0 : static_cast<int>(outcomes[0].u.size()); }

    std::string label_of(std::size_t idx) const {
        const auto& o = outcomes[idx];
        return o.label.empty() ? "#" + std::to_string(idx) : o.label;
    }
};

struct PolytopeSpace {
    int num_vars = 0;
    std::vector<LinearConstraint> constraints;
    std::vector<double> lower;  // defaults to 0
    std::vector<double> upper;  // defaults to +inf
    std::vector<std::vector<double>> utility;  // per-agent linear functionals

    int agents() const { return static_cast<int>(utility.size()); }

    UtilityVector utilities_at(const std::vector<double>& x) const {
        UtilityVector u(utility.size(), 0.0);
        for (std::size_t i = 0; i < utility.size(); ++i)
            for (int j = 0; j < num_vars; ++j) u[i] += utility[i][j] * x[j];
        return u;
    }
};

// Implicit space of all complete indivisible allocations of a goods instance.
struct GoodsExactSpace {
    GoodsInstance inst;

    int agents() const { return inst.n; }
};

using OutcomeSpace = std::variant<EnumeratedSpace, PolytopeSpace, GoodsExactSpace>;

inline int space_agents(const OutcomeSpace& space) {
    return std::visit([](const auto& s) { return s.agents(); }, space);
}

// ---------------------------------------------------------------------------
// Space constructors

struct EnumerationCaps {
    int max_pb_projects = 20;
    double max_allocations = 1e7;
};

inline std::string funded_label(const PBInstance& inst, std::uint64_t mask) {
    std::string label = "{";
    bool first = true;
    for (int p = 0; p < inst.num_projects(); ++p)
        if (mask >> p & 1) {
            if (!first) label += ",";
            label += inst.projects[p].id;
            first = false;
        }
    return label + "}";
}

// Every subset of fundable projects with total cost within budget, utilities
// cached under the instance's utility model and epsilon floor.
inline EnumeratedSpace enumerate_budget_feasible(const PBInstance& inst,
                                                 const EnumerationCaps& caps = {}) {
    inst.validate();
    const int np = inst.num_projects();
    if (np > caps.max_pb_projects)
        throw ScaleCapError("too many projects to enumerate budget-feasible subsets");
    const int nv = inst.num_voters();

    // approvers[p]: voters approving project p.
    std::vector<std::vector<int>> approvers(np);
    for (int v = 0; v < nv; ++v)
        for (int p : inst.ballots[v]) approvers[p].push_back(v);

    EnumeratedSpace space;
    std::vector<double> raw(nv, 0.0);
    std::uint64_t mask = 0;
    double cost = 0.0;

    auto emit = [&]() {
        EnumeratedOutcome o;
        o.payload = mask;
        o.label = funded_label(inst, mask);
        o.u.resize(nv);
        for (int v = 0; v < nv; ++v) o.u[v] = raw[v] > 0.0 ? raw[v] : inst.epsilon_floor;
        space.outcomes.push_back(std::move(o));
    };
    auto dfs = [&](auto&& self, int p) -> void {
        if (p == np) {
            emit();
            return;
        }
        self(self, p + 1);
        if (!inst.fundable(p) || cost + inst.projects[p].cost > inst.budget + kFloorTol) return;
        mask |= 1ull << p;
        cost += inst.projects[p].cost;
        double unit = inst.utility_model == PBUtilityModel::Approval ? 1.0 : inst.projects[p].cost;
        for (int v : approvers[p]) raw[v] += unit;
        self(self, p + 1);
        for (int v : approvers[p]) raw[v] -= unit;
        cost -= inst.projects[p].cost;
        mask &= ~(1ull << p);
    };
    dfs(dfs, 0);
    return space;
}

inline std::vector<int> owners_from_index(std::uint64_t idx, int n, int m) {
    std::vector<int> owners(m, 0);
    for (int g = 0; g < m; ++g) {
        owners[g] = static_cast<int>(idx % n);
        idx /= n;
    }
    return owners;
}

// All n^m complete indivisible allocations; payload encodes the owner vector
// in base n with good 0 changing fastest.
inline EnumeratedSpace enumerate_allocations(const GoodsInstance& inst,
                                             const EnumerationCaps& caps = {}) {
    require(!inst.divisible, "enumerate_allocations needs an indivisible instance");
    inst.validate();
    double count = std::pow(static_cast<double>(inst.n), inst.m);
    if (count > caps.max_allocations)
        throw ScaleCapError("n^m exceeds the allocation enumeration cap");
    EnumeratedSpace space;
    space.outcomes.reserve(static_cast<std::size_t>(count));
    std::uint64_t idx = 0;
    for_each_allocation(inst.n, inst.m, [&](const std::vector<int>& owners) {
        EnumeratedOutcome o;
        o.payload = idx++;
        o.u.assign(inst.n, 0.0);
        for (int g = 0; g < inst.m; ++g) o.u[owners[g]] += inst.value[owners[g]][g];
        space.outcomes.push_back(std::move(o));
    });
    return space;
}

// Divisible instance as a polytope: n*m share variables in [0,1], one
// column-sum equality per good, additive utility functionals.
inline PolytopeSpace fractional_goods_polytope(const GoodsInstance& inst) {
    require(inst.divisible, "polytope backend needs a divisible instance");
    inst.validate();
    PolytopeSpace space;
    space.num_vars = inst.n * inst.m;
    space.lower.assign(space.num_vars, 0.0);
    space.upper.assign(space.num_vars, 1.0);
    for (int g = 0; g < inst.m; ++g) {
        LinearConstraint con;
        con.coeff.assign(space.num_vars, 0.0);
        for (int i = 0; i < inst.n; ++i) con.coeff[i * inst.m + g] = 1.0;
        con.sense = Sense::Eq;
        con.rhs = 1.0;
        space.constraints.push_back(std::move(con));
    }
    space.utility.assign(inst.n, std::vector<double>(space.num_vars, 0.0));
    for (int i = 0; i < inst.n; ++i)
        for (int g = 0; g < inst.m; ++g) space.utility[i][i * inst.m + g] = inst.value[i][g];
    return space;
}

inline OutcomeSpace space_from_table(const FiniteUtilityTable& table) {
    table.validate();
    EnumeratedSpace space;
    for (const auto& [label, u] : table.outcomes) space.outcomes.push_back({label, u, 0});
    return space;
}

// ---------------------------------------------------------------------------
// Queries

struct SpaceOptimum {
    double value = 0.0;
    std::string label;
    UtilityVector utilities;
};

namespace detail {

inline bool floors_ok(const UtilityVector& u, const std::vector<double>& floors) {
    for (std::size_t k = 0; k < floors.size(); ++k)
        if (std::isfinite(floors[k]) && u[k] < floors[k] - kFloorTol) return false;
    return true;
}

inline LinearProgram polytope_lp(const PolytopeSpace& space, std::vector<double> objective,
                                 const std::vector<double>& floors) {
    LinearProgram lp;
    lp.objective = std::move(objective);
    lp.constraints = space.constraints;
    lp.lower = space.lower;
    lp.upper = space.upper;
    for (std::size_t k = 0; k < floors.size(); ++k) {
        if (!std::isfinite(floors[k])) continue;
        LinearConstraint con;
        con.coeff = space.utility[k];
        con.sense = Sense::Ge;
        con.rhs = floors[k];
        lp.constraints.push_back(std::move(con));
    }
    return lp;
}

}  // namespace detail

// Maximizes agent `target`'s utility subject to u_k >= floors[k] for every
// agent with a finite floor. Returns nullopt when the floor system is
// infeasible. First-found ties keep the earliest outcome (deterministic
// iteration order).
inline std::optional<SpaceOptimum> max_utility_with_floors(const OutcomeSpace& space, int target,
                                                           const std::vector<double>& floors) {
    if (const auto* en = std::get_if<EnumeratedSpace>(&space)) {
        std::optional<SpaceOptimum> best;
        for (std::size_t idx = 0; idx < en->outcomes.size(); ++idx) {
            const auto& o = en->outcomes[idx];
            if (!detail::floors_ok(o.u, floors)) continue;
            if (!best || o.u[target] > best->value + 1e-15)
                best = SpaceOptimum{o.u[target], en->label_of(idx), o.u};
        }
        return best;
    }
    if (const auto* poly = std::get_if<PolytopeSpace>(&space)) {
        LinearProgram lp = detail::polytope_lp(*poly, poly->utility[target], floors);
        LpSolution sol = solve_lp(lp);
        if (sol.status == LpStatus::Infeasible) return std::nullopt;
        require(sol.status == LpStatus::Optimal, "floor query LP did not solve");
        return SpaceOptimum{sol.value, "lp-point", poly->utilities_at(sol.x)};
    }
    const auto& goods = std::get<GoodsExactSpace>(space);
    auto res = goods_max_with_floors(goods.inst, target, floors);
    if (!res) return std::nullopt;
    UtilityVector u(goods.inst.n, 0.0);
    for (int g = 0; g < goods.inst.m; ++g)
        u[res->owners[g]] += goods.inst.value[res->owners[g]][g];
    return SpaceOptimum{res->value, "bnb-allocation", std::move(u)};
}

// Maximizes min_{i in group} scale * u_i(o') / reference_i subject to floors.
// Agents with zero reference are treated as unconstrained in the min (their
// ratio is +inf for any positive utility); callers with zero references
// handle the 0/0 convention themselves.
inline std::optional<SpaceOptimum> max_min_scaled_utility(const OutcomeSpace& space,
                                                          const std::vector<int>& group,
                                                          double scale,
                                                          const std::vector<double>& floors,
                                                          const UtilityVector& reference) {
    require(!group.empty(), "group must be non-empty");
    require(scale > 0.0, "scale must be positive");
    if (const auto* en = std::get_if<EnumeratedSpace>(&space)) {
        std::optional<SpaceOptimum> best;
        for (std::size_t idx = 0; idx < en->outcomes.size(); ++idx) {
            const auto& o = en->outcomes[idx];
            if (!detail::floors_ok(o.u, floors)) continue;
            double worst = kInf;
            for (int i : group)
                worst = std::min(worst, scale * safe_ratio(o.u[i], reference[i], 1.0));
            if (!best || worst > best->value + 1e-15)
                best = SpaceOptimum{worst, en->label_of(idx), o.u};
        }
        return best;
    }
    const auto* poly = std::get_if<PolytopeSpace>(&space);
    require(poly != nullptr, "max-min queries need an enumerated or polytope backend");
    // Variables: x ++ t. Maximize t with scale*u_i(x) - reference_i*t >= 0.
    int nv = poly->num_vars;
    LinearProgram lp;
    lp.objective.assign(nv + 1, 0.0);
    lp.objective[nv] = 1.0;
    lp.lower.assign(nv + 1, 0.0);
    lp.upper.assign(nv + 1, kInf);
    for (int j = 0; j < nv; ++j) {
        lp.lower[j] = poly->lower.empty() ? 0.0 : poly->lower[j];
        lp.upper[j] = poly->upper.empty() ? kInf : poly->upper[j];
    }
    for (const auto& con : poly->constraints) {
        LinearConstraint wide = con;
        wide.coeff.push_back(0.0);
        lp.constraints.push_back(std::move(wide));
    }
    for (std::size_t k = 0; k < floors.size(); ++k) {
        if (!std::isfinite(floors[k])) continue;
        LinearConstraint con;
        con.coeff = poly->utility[k];
        con.coeff.push_back(0.0);
        con.sense = Sense::Ge;
        con.rhs = floors[k];
        lp.constraints.push_back(std::move(con));
    }
    for (int i : group) {
        if (reference[i] <= 0.0) continue;  // ratio is +inf; no constraint on t
        LinearConstraint con;
        con.coeff.assign(nv + 1, 0.0);
        for (int j = 0; j < nv; ++j) con.coeff[j] = scale * poly->utility[i][j];
        con.coeff[nv] = -reference[i];
        con.sense = Sense::Ge;
        con.rhs = 0.0;
        lp.constraints.push_back(std::move(con));
    }
    LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Infeasible) return std::nullopt;
    if (sol.status == LpStatus::Unbounded)
        return SpaceOptimum{kInf, "lp-unbounded", {}};
    require(sol.status == LpStatus::Optimal, "max-min LP did not solve");
    std::vector<double> x(sol.x.begin(), sol.x.begin() + nv);
    return SpaceOptimum{sol.value, "lp-point", poly->utilities_at(x)};
}

}  // namespace fairaudit
