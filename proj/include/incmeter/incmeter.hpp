#pragma once

// Inconsistency measurement for relational instances under denial
// constraints and functional dependencies: conflict detection, repair
// computation, the repair-counting degree, and repair-program emission.

#include "incmeter/asp.hpp"
#include "incmeter/cli.hpp"
#include "incmeter/measure.hpp"
#include "incmeter/model.hpp"
#include "incmeter/parse.hpp"
#include "incmeter/rational.hpp"
#include "incmeter/repairs.hpp"
#include "incmeter/serialize.hpp"
#include "incmeter/violations.hpp"
