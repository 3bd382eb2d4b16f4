// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/error.hpp>
#include <catmig/graph.hpp>
#include <catmig/schema.hpp>
#include <catmig/word_problem.hpp>
#include <catmig/instance.hpp>
#include <catmig/morphism.hpp>
#include <catmig/translation.hpp>
#include <catmig/delta.hpp>
#include <catmig/pi.hpp>
#include <catmig/sigma.hpp>
#include <catmig/adjunction.hpp>
#include <catmig/typing.hpp>
#include <catmig/pipeline.hpp>
#include <catmig/rdf.hpp>
#include <catmig/render.hpp>
#include <catmig/dsl/document.hpp>
#include <catmig/dsl/lexer.hpp>
#include <catmig/dsl/parser.hpp>
#include <catmig/dsl/printer.hpp>
