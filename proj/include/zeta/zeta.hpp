#pragma once

#include "zeta/error.hpp"
#include "zeta/phase.hpp"
#include "zeta/type.hpp"
#include "zeta/term.hpp"
#include "zeta/parser.hpp"
#include "zeta/typecheck.hpp"
#include "zeta/diagram.hpp"
#include "zeta/matrix.hpp"
#include "zeta/eval.hpp"
#include "zeta/semantics.hpp"
#include "zeta/theory.hpp"
