// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/catmig.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef CATMIG_DATA_DIR
#error "CATMIG_DATA_DIR must point at the data/ directory"
#endif

namespace catmig::testing {

inline std::string data_path(const std::string &file) { return std::string(CATMIG_DATA_DIR) + "/" + file; }

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (not in) throw std::runtime_error("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Parses `data/<file>`, optionally against declarations from an earlier document.
inline dsl::Document load(const std::string &file, const dsl::Document *context = nullptr)
{
    return dsl::parse(read_file(data_path(file)), context);
}

inline const Instance & instance(const dsl::Document &doc, std::string_view name)
{
    if (auto *d = doc.instance(name)) return *d->instance;
    throw std::out_of_range("no instance " + std::string(name));
}

inline std::shared_ptr<const Instance> instance_ptr(const dsl::Document &doc, std::string_view name)
{
    if (auto *d = doc.instance(name)) return d->instance;
    throw std::out_of_range("no instance " + std::string(name));
}

inline const Translation & translation(const dsl::Document &doc, std::string_view name)
{
    if (auto *d = doc.translation(name)) return d->translation;
    throw std::out_of_range("no translation " + std::string(name));
}

inline const InstanceMorphism & morphism(const dsl::Document &doc, std::string_view name)
{
    if (auto *d = doc.morphism(name)) return d->morphism;
    throw std::out_of_range("no morphism " + std::string(name));
}

inline const TypedInstance & typed(const dsl::Document &doc, std::string_view name)
{
    if (auto *d = doc.typed(name)) return d->typed;
    throw std::out_of_range("no typed instance " + std::string(name));
}

inline SchemaPtr schema(const dsl::Document &doc, std::string_view name)
{
    if (auto *d = doc.schema(name)) return d->schema;
    throw std::out_of_range("no schema " + std::string(name));
}

/// Cell text of `row` in column `arrow`.
inline std::string cell(const Instance &I, std::string_view arrow, std::string_view row)
{
    const Graph &g = I.graph();
    ArrowId a = g.arrow_named(arrow);
    RowIndex r = I.row_index(g.source(a), row);
    return I.row(g.target(a), I.value(a, r));
}

inline std::vector<std::string> rows_of(const Instance &I, std::string_view vertex)
{
    auto rs = I.rows(I.graph().vertex(vertex));
    return {rs.begin(), rs.end()};
}

}
