// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/adjunction.hpp>
#include <catmig/typing.hpp>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace catmig {

enum class StepKind { Delta, Sigma, Pi, SigmaHat, DeltaHat, PiHat };

inline std::string_view to_string(StepKind k)
{
    switch (k) {
    case StepKind::Delta: return "delta";
    case StepKind::Sigma: return "sigma";
    case StepKind::Pi: return "pi";
    case StepKind::SigmaHat: return "sigma-hat";
    case StepKind::DeltaHat: return "delta-hat";
    case StepKind::PiHat: return "pi-hat";
    }
    return "?";
}

inline std::optional<StepKind> parse_step_kind(std::string_view s)
{
    for (auto k : {StepKind::Delta, StepKind::Sigma, StepKind::Pi, StepKind::SigmaHat, StepKind::DeltaHat, StepKind::PiHat})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

struct PipelineStep
{
    StepKind kind;
    std::variant<Translation, InstanceMorphism> along;  // a translation for Δ/Σ/Π, a typing morphism k otherwise
};

using MigrationPipeline = std::vector<PipelineStep>;
using PipelineValue = std::variant<Instance, TypedInstance>;

/// Evaluates the steps left to right; the value's kind (plain or typed) must suit each step.
inline PipelineValue run_pipeline(const MigrationPipeline &pipeline, PipelineValue value, const MigrationOptions &opts = {},
                                  MigrationLog *log = nullptr)
{
    for (std::size_t i = 0; i < pipeline.size(); ++i) {
        const auto &step = pipeline[i];
        std::string where = "step " + std::to_string(i + 1) + " (" + std::string(to_string(step.kind)) + ")";
        bool plain = step.kind == StepKind::Delta or step.kind == StepKind::Sigma or step.kind == StepKind::Pi;
        if (plain) {
            const auto *F = std::get_if<Translation>(&step.along);
            const auto *I = std::get_if<Instance>(&value);
            if (not F) throw SchemaMismatch(where + " needs a translation");
            if (not I) throw SchemaMismatch(where + " needs an untyped instance");
            const Schema &expect = step.kind == StepKind::Delta ? F->target() : F->source();
            if (I->schema() != expect)
                throw SchemaMismatch(where + ": instance is on '" + I->schema().name() + "', expected '" + expect.name() + "'");
            switch (step.kind) {
            case StepKind::Delta: value = delta(*F, *I); break;
            case StepKind::Sigma: value = sigma(*F, *I, opts, log); break;
            default: value = pi(*F, *I, opts, log); break;
            }
        } else {
            const auto *k = std::get_if<InstanceMorphism>(&step.along);
            const auto *t = std::get_if<TypedInstance>(&value);
            if (not k) throw SchemaMismatch(where + " needs a morphism of typing instances");
            if (not t) throw SchemaMismatch(where + " needs a typed instance");
            switch (step.kind) {
            case StepKind::SigmaHat: value = typechange_sigma(*k, *t); break;
            case StepKind::DeltaHat: value = typechange_delta(*k, *t); break;
            default: value = typechange_pi(*k, *t, opts); break;
            }
        }
    }
    return value;
}

}
