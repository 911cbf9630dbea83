#pragma once

// Umbrella header: structural observability analysis, sensor and link cost
// optimization, and distributed inference simulation over social digraphs.

#include "obsnet/assignment.hpp"
#include "obsnet/contraction.hpp"
#include "obsnet/cyber.hpp"
#include "obsnet/cyber_design.hpp"
#include "obsnet/digraph.hpp"
#include "obsnet/errors.hpp"
#include "obsnet/estimation.hpp"
#include "obsnet/io.hpp"
#include "obsnet/matching.hpp"
#include "obsnet/measurement.hpp"
#include "obsnet/observability.hpp"
#include "obsnet/realization.hpp"
#include "obsnet/rng.hpp"
#include "obsnet/scc.hpp"
#include "obsnet/simulation.hpp"
#include "obsnet/spanning.hpp"
