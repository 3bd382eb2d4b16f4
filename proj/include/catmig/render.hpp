// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/instance.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace catmig {

namespace detail {

inline std::vector<std::vector<std::string>> table_cells(const Instance &I, VertexId v)
{
    const Graph &g = I.graph();
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"ID"};
    for (ArrowId a : g.outgoing(v)) header.push_back(g.name(a));
    cells.push_back(std::move(header));
    for (RowIndex r = 0; r < I.row_count(v); ++r) {
        std::vector<std::string> row{I.row(v, r)};
        for (ArrowId a : g.outgoing(v)) row.push_back(I.row(g.target(a), I.value(a, r)));
        cells.push_back(std::move(row));
    }
    return cells;
}

inline std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// display width in code points, so `≃` or `é` do not skew the columns
inline std::size_t width(const std::string &s)
{
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
}

}

inline std::string render_csv(const Instance &I, VertexId v)
{
    std::string out;
    for (const auto &row : detail::table_cells(I, v)) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + detail::csv_field(row[i]);
        out += "\n";
    }
    return out;
}

inline std::string render_ascii(const Instance &I, VertexId v)
{
    auto cells = detail::table_cells(I, v);
    std::vector<std::size_t> w(cells.front().size(), 0);
    for (const auto &row : cells)
        for (std::size_t i = 0; i < row.size(); ++i) w[i] = std::max(w[i], detail::width(row[i]));
    auto rule = [&] {
        std::string s = "+";
        for (auto x : w) s += std::string(x + 2, '-') + "+";
        return s + "\n";
    };
    std::string out = I.graph().name(v) + "\n" + rule();
    for (std::size_t r = 0; r < cells.size(); ++r) {
        out += "|";
        for (std::size_t i = 0; i < cells[r].size(); ++i)
            out += " " + cells[r][i] + std::string(w[i] - detail::width(cells[r][i]), ' ') + " |";
        out += "\n";
        if (r == 0) out += rule();
    }
    return out + rule();
}

}
