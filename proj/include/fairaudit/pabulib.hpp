#pragma once

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/model.hpp"

// Pabulib .pb text files: META / PROJECTS / VOTES sections, semicolon-
// delimited rows, comma-separated approval lists. Parsing is lossless (every
// column survives a round trip); the semantic view extracts what the PB model
// needs and validates it.

namespace fairaudit {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_number, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
};

struct PabulibFile {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> project_header;
    std::vector<std::vector<std::string>> project_rows;
    std::vector<std::string> vote_header;
    std::vector<std::vector<std::string>> vote_rows;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, sep)) cells.push_back(cell);
    if (!line.empty() && line.back() == sep) cells.push_back("");
    return cells;
}

inline double parse_number(const std::string& text, int line, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
        if (used != text.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number for " + what + ", got '" + text + "'");
    }
}

}  // namespace detail

inline PabulibFile parse_pabulib_file(const std::string& text) {
    PabulibFile file;
    enum class Section { None, Meta, Projects, Votes };
    Section section = Section::None;
    bool seen_projects = false, seen_votes = false, seen_meta = false;
    bool header_pending = false;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "META") {
            section = Section::Meta;
            seen_meta = true;
            continue;
        }
        if (line == "PROJECTS") {
            section = Section::Projects;
            seen_projects = true;
            header_pending = true;
            continue;
        }
        if (line == "VOTES") {
            section = Section::Votes;
            seen_votes = true;
            header_pending = true;
            continue;
        }
        std::vector<std::string> cells = detail::split(line, ';');
        switch (section) {
            case Section::None:
                throw ParseError(line_no, "content before any section marker");
            case Section::Meta:
                if (cells.size() != 2)
                    throw ParseError(line_no, "META rows must be key;value");
                file.meta.emplace_back(cells[0], cells[1]);
                break;
            case Section::Projects:
                if (header_pending) {
                    file.project_header = cells;
                    header_pending = false;
                } else if (cells.size() != file.project_header.size()) {
                    throw ParseError(line_no, "project row width differs from header");
                } else {
                    file.project_rows.push_back(cells);
                }
                break;
            case Section::Votes:
                if (header_pending) {
                    file.vote_header = cells;
                    header_pending = false;
                } else if (cells.size() != file.vote_header.size()) {
                    throw ParseError(line_no, "vote row width differs from header");
                } else {
                    file.vote_rows.push_back(cells);
                }
                break;
        }
    }
    if (!seen_meta) throw ParseError(line_no, "missing META section");
    if (!seen_projects) throw ParseError(line_no, "missing PROJECTS section");
    if (!seen_votes) throw ParseError(line_no, "missing VOTES section");
    return file;
}

inline std::string serialize_pabulib(const PabulibFile& file) {
    std::string out = "META\n";
    auto join = [](const std::vector<std::string>& cells) {
        std::string row;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) row += ';';
            row += cells[i];
        }
        return row;
    };
    for (const auto& [key, value] : file.meta) out += key + ";" + value + "\n";
    out += "PROJECTS\n" + join(file.project_header) + "\n";
    for (const auto& row : file.project_rows) out += join(row) + "\n";
    out += "VOTES\n" + join(file.vote_header) + "\n";
    for (const auto& row : file.vote_rows) out += join(row) + "\n";
    return out;
}

inline PBInstance to_pb_instance(const PabulibFile& file,
                                 PBUtilityModel model = PBUtilityModel::Approval) {
    PBInstance inst;
    inst.utility_model = model;
    for (const auto& [key, value] : file.meta)
        if (key == "budget") inst.budget = detail::parse_number(value, 0, "budget");
    if (inst.budget <= 0.0) throw ParseError(0, "META is missing a positive budget");

    auto column = [](const std::vector<std::string>& header, const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    int id_col = column(file.project_header, "project_id");
    int cost_col = column(file.project_header, "cost");
    if (id_col < 0 || cost_col < 0)
        throw ParseError(0, "PROJECTS header needs project_id and cost columns");
    std::vector<std::pair<std::string, int>> id_index;
    for (const auto& row : file.project_rows) {
        PBProject project;
        project.id = row[id_col];
        project.cost = detail::parse_number(row[cost_col], 0, "cost of project " + project.id);
        id_index.emplace_back(project.id, static_cast<int>(inst.projects.size()));
        inst.projects.push_back(std::move(project));
    }
    int vote_col = column(file.vote_header, "vote");
    if (vote_col < 0) throw ParseError(0, "VOTES header needs a vote column");
    for (const auto& row : file.vote_rows) {
        std::vector<int> ballot;
        for (const std::string& token : detail::split(row[vote_col], ',')) {
            if (token.empty()) continue;
            auto hit = std::find_if(id_index.begin(), id_index.end(),
                                    [&](const auto& kv) { return kv.first == token; });
            if (hit == id_index.end())
                throw ParseError(0, "vote references unknown project '" + token + "'");
            ballot.push_back(hit->second);
        }
        std::sort(ballot.begin(), ballot.end());
        inst.ballots.push_back(std::move(ballot));
    }
    inst.epsilon_floor = PBInstance::default_floor(model, inst.budget);
    inst.validate();
    return inst;
}

inline PBInstance parse_pabulib(const std::string& text,
                                PBUtilityModel model = PBUtilityModel::Approval) {
    return to_pb_instance(parse_pabulib_file(text), model);
}

}  // namespace fairaudit
