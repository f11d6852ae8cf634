#pragma once

// Exact minimization of integer-valued sums of submodular terms by capacity
// scaling over an auxiliary flow network, with specialized residual-arc
// subroutines per term kind.

#include "sfmin/generator.hpp"
#include "sfmin/instance.hpp"
#include "sfmin/io.hpp"
#include "sfmin/oracle.hpp"
#include "sfmin/phase.hpp"
#include "sfmin/smawk.hpp"
#include "sfmin/solver.hpp"
#include "sfmin/terms.hpp"
