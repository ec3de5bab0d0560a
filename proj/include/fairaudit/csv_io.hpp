#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/model.hpp"
#include "fairaudit/pabulib.hpp"

// CSV ingestion (RFC-4180 subset: comma-separated, no quoting) for valuation
// and similarity matrices. Rows are agents, columns are goods, with a header
// row of good labels.

namespace fairaudit {

struct GoodsCsv {
    std::vector<std::string> good_labels;
    GoodsInstance instance;
};

inline GoodsCsv parse_goods_csv(const std::string& text, bool divisible = false) {
    GoodsCsv out;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = detail::split(line, ',');
        if (out.good_labels.empty()) {
            out.good_labels = cells;
            continue;
        }
        if (cells.size() != out.good_labels.size())
            throw ParseError(line_no, "ragged row: expected " +
                                          std::to_string(out.good_labels.size()) + " cells");
        std::vector<double> row;
        for (const std::string& cell : cells) {
            double v = detail::parse_number(cell, line_no, "valuation");
            if (v < 0.0) throw ParseError(line_no, "negative valuation " + cell);
            row.push_back(v);
        }
        out.instance.value.push_back(std::move(row));
    }
    if (out.good_labels.empty()) throw ParseError(line_no, "missing header row");
    out.instance.n = static_cast<int>(out.instance.value.size());
    out.instance.m = static_cast<int>(out.good_labels.size());
    out.instance.divisible = divisible;
    out.instance.validate();
    return out;
}

inline std::string serialize_goods_csv(const GoodsInstance& inst,
                                       const std::vector<std::string>& labels = {}) {
    std::string out;
    for (int g = 0; g < inst.m; ++g) {
        if (g) out += ',';
        out += labels.empty() ? "g" + std::to_string(g + 1) : labels[g];
    }
    out += '\n';
    for (const auto& row : inst.value) {
        for (int g = 0; g < inst.m; ++g) {
            if (g) out += ',';
            std::ostringstream cell;
            cell << row[g];
            out += cell.str();
        }
        out += '\n';
    }
    return out;
}

// Square similarity matrix; conflicts beyond the diagonal arrive separately.
inline ReviewInstance parse_similarity_csv(const std::string& text, int load = 3,
                                           double score_floor = 1e-3) {
    GoodsCsv raw = parse_goods_csv(text);
    require_dims(raw.instance.n == raw.instance.m, "similarity matrix must be square");
    return ReviewInstance::make(raw.instance.n, raw.instance.value, {}, load, score_floor);
}

}  // namespace fairaudit
