#pragma once

#include "osm/ast.hpp"
#include "osm/cfg.hpp"
#include "osm/cli.hpp"
#include "osm/ctl.hpp"
#include "osm/error.hpp"
#include "osm/formula.hpp"
#include "osm/kripke.hpp"
#include "osm/lexer.hpp"
#include "osm/parser.hpp"
#include "osm/pipeline.hpp"
#include "osm/printer.hpp"
#include "osm/propositional.hpp"
#include "osm/props_file.hpp"
#include "osm/result.hpp"
#include "osm/trace.hpp"
#include "osm/traversal.hpp"
#include "osm/valuation.hpp"
#include "osm/weaver.hpp"
