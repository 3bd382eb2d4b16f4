// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/typing.hpp>

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace catmig::dsl {

struct SchemaDecl
{
    SchemaPtr schema;

    const std::string & name() const { return schema->name(); }
    bool operator==(const SchemaDecl &o) const { return *schema == *o.schema; }
};

struct InstanceDecl
{
    std::string name;
    std::shared_ptr<const Instance> instance;

    bool operator==(const InstanceDecl &o) const { return name == o.name and *instance == *o.instance; }
};

struct TranslationDecl
{
    std::string name;
    Translation translation;

    bool operator==(const TranslationDecl&) const = default;
};

struct MorphismDecl
{
    std::string name;
    std::string source;
    std::string target;
    InstanceMorphism morphism;

    bool operator==(const MorphismDecl&) const = default;
};

struct TypedDecl
{
    std::string name;
    std::string instance;
    std::string typing;
    TypedInstance typed;

    bool operator==(const TypedDecl&) const = default;
};

using Declaration = std::variant<SchemaDecl, InstanceDecl, TranslationDecl, MorphismDecl, TypedDecl>;

inline const std::string & declaration_name(const Declaration &d)
{
    return std::visit([](const auto &x) -> const std::string & {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SchemaDecl>) return x.name();
        else return x.name;
    }, d);
}

inline const char * declaration_kind(const Declaration &d)
{
    static constexpr const char *kinds[] = {"schema", "instance", "translation", "morphism", "typedinstance"};
    return kinds[d.index()];
}

/// An ordered list of named declarations; names are unique per kind.
class Document
{
    std::vector<Declaration> decls_;

    template<typename T>
    const T * find_kind(std::string_view name) const
    {
        for (const auto &d : decls_)
            if (const auto *x = std::get_if<T>(&d); x and declaration_name(d) == name) return x;
        return nullptr;
    }

    public:
    const std::vector<Declaration> & declarations() const { return decls_; }
    bool empty() const { return decls_.empty(); }

    bool contains(const Declaration &d) const
    {
        for (const auto &e : decls_)
            if (e.index() == d.index() and declaration_name(e) == declaration_name(d)) return true;
        return false;
    }

    /// Throws `StructureError` on a duplicate name of the same kind.
    void add(Declaration d)
    {
        if (contains(d))
            throw StructureError(std::string("duplicate ") + declaration_kind(d) + " '" + declaration_name(d) + "'");
        decls_.push_back(std::move(d));
    }

    void append(const Document &other)
    {
        for (const auto &d : other.decls_) add(d);
    }

    const SchemaDecl * schema(std::string_view name) const { return find_kind<SchemaDecl>(name); }
    const InstanceDecl * instance(std::string_view name) const { return find_kind<InstanceDecl>(name); }
    const TranslationDecl * translation(std::string_view name) const { return find_kind<TranslationDecl>(name); }
    const MorphismDecl * morphism(std::string_view name) const { return find_kind<MorphismDecl>(name); }
    const TypedDecl * typed(std::string_view name) const { return find_kind<TypedDecl>(name); }

    bool operator==(const Document&) const = default;
};

}
