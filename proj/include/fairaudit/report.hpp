#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fairaudit/audit.hpp"
#include "fairaudit/criteria.hpp"

// JSON / CSV emission of fairness reports. JSON has no infinity literal, so
// infinite ratios are encoded as the string "inf" next to a boolean flag.

namespace fairaudit {

using json = nlohmann::json;

inline json encode_ratio(double v) {
    if (is_inf(v)) return "inf";
    return v;
}

inline json witness_to_json(const HarmWitness& w) {
    json j;
    j["improving"] = w.improving;
    if (w.sacrificed >= 0) j["sacrificed"] = w.sacrificed;
    if (!w.improving_group.empty()) j["improving_group"] = w.improving_group;
    if (!w.sacrificed_group.empty()) j["sacrificed_group"] = w.sacrificed_group;
    j["alternative"] = w.alternative;
    j["alternative_utilities"] = w.alternative_utilities;
    j["ratio"] = encode_ratio(w.ratio);
    return j;
}

// One report entry per instance x rule, following the fixed schema consumed
// by the plotting scripts.
inline json report_entry(const std::string& instance_id, const std::string& rule,
                         const FairnessReport& report, double util_welfare) {
    json j;
    j["instance"] = instance_id;
    j["rule"] = rule;
    if (report.ihr) {
        j["ihr"] = encode_ratio(*report.ihr);
        j["ihr_infinite"] = report.ihr_infinite();
    }
    if (report.per) {
        j["per"] = encode_ratio(*report.per);
        j["per_infinite"] = report.per_infinite();
    }
    if (!report.ghr_fractions.empty()) {
        json curve = json::array();
        for (std::size_t k = 0; k < report.ghr_fractions.size(); ++k)
            curve.push_back({{"min_frac", report.ghr_fractions[k]},
                             {"value", encode_ratio(report.ghr_values[k])}});
        j["ghr_curve"] = curve;
        j["ghr_method"] = report.ghr_method;
    }
    if (report.eghr_value) j["eghr"] = encode_ratio(*report.eghr_value);
    if (report.pf) {
        j["pf"] = encode_ratio(*report.pf);
        j["pf_infinite"] = report.pf_infinite();
    }
    if (report.core_ok) j["core_ok"] = *report.core_ok;
    if (report.pareto_ok) j["pareto_ok"] = *report.pareto_ok;
    if (report.envy_free) j["envy_free"] = *report.envy_free;
    if (report.prop) j["prop_ratio"] = encode_ratio(*report.prop);
    j["nw"] = report.nw;
    if (report.nw_vs_max) j["nw_ratio"] = *report.nw_vs_max;
    j["util"] = util_welfare;
    json witnesses = json::object();
    if (report.ihr_witness) witnesses["ihr"] = witness_to_json(*report.ihr_witness);
    for (std::size_t k = 0; k < report.ghr_witnesses.size(); ++k)
        if (report.ghr_witnesses[k])
            witnesses["ghr@" + std::to_string(report.ghr_fractions[k])] =
                witness_to_json(*report.ghr_witnesses[k]);
    j["witnesses"] = witnesses;
    return j;
}

// Flat CSV of the numeric columns, one row per entry, for plotting.
inline std::string reports_to_csv(const std::vector<json>& entries) {
    std::vector<double> fractions;
    for (const json& e : entries)
        if (e.contains("ghr_curve"))
            for (const auto& point : e["ghr_curve"]) {
                double f = point["min_frac"].get<double>();
                if (std::find(fractions.begin(), fractions.end(), f) == fractions.end())
                    fractions.push_back(f);
            }
    std::sort(fractions.begin(), fractions.end());

    std::string out = "instance,rule,ihr,ihr_infinite,per,per_infinite,pf,nw,nw_ratio,util,prop_ratio";
    for (double f : fractions) out += ",ghr@" + std::to_string(f);
    out += "\n";
    auto cell = [](const json& e, const std::string& key) -> std::string {
        if (!e.contains(key)) return "";
        const json& v = e[key];
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
        std::ostringstream ss;
        ss << v.get<double>();
        return ss.str();
    };
    for (const json& e : entries) {
        out += e["instance"].get<std::string>() + "," + e["rule"].get<std::string>();
        for (const std::string& key :
             {std::string("ihr"), std::string("ihr_infinite"), std::string("per"),
              std::string("per_infinite"), std::string("pf"), std::string("nw"),
              std::string("nw_ratio"), std::string("util"), std::string("prop_ratio")})
            out += "," + cell(e, key);
        for (double f : fractions) {
            std::string value;
            if (e.contains("ghr_curve"))
                for (const auto& point : e["ghr_curve"])
                    if (point["min_frac"].get<double>() == f) {
                        const json& v = point["value"];
                        value = v.is_string() ? v.get<std::string>()
                                              : std::to_string(v.get<double>());
                    }
            out += "," + value;
        }
        out += "\n";
    }
    return out;
}

}  // namespace fairaudit
