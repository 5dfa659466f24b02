#pragma once

// Sparse linear regression via adaptively weighted elastic-net shrinkage:
// coordinate-descent solvers, BIC tuning, marginal screening for p > n,
// design diagnostics and a reproducible Monte Carlo study harness.

#include "adenet/adaptive.hpp"
#include "adenet/csv.hpp"
#include "adenet/diagnostics.hpp"
#include "adenet/oracle.hpp"
#include "adenet/rng.hpp"
#include "adenet/screening.hpp"
#include "adenet/simulation.hpp"
#include "adenet/solver.hpp"
#include "adenet/tuning.hpp"
#include "adenet/types.hpp"
