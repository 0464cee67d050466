#pragma once

// Causal-effect estimation for Mendelian randomization with possibly invalid
// instruments: TSLS baseline, empirical Bayes shrinkage estimators under
// common-location and spike-and-slab priors (fit by Monte Carlo EM with Gibbs
// sampling), a summary-statistics mode, error-bound diagnostics, and a seeded
// synthetic-experiment harness.

#include "mreb/config.hpp"
#include "mreb/diagnostics.hpp"
#include "mreb/errors.hpp"
#include "mreb/first_stage.hpp"
#include "mreb/gibbs.hpp"
#include "mreb/grid.hpp"
#include "mreb/io.hpp"
#include "mreb/mcem.hpp"
#include "mreb/moments.hpp"
#include "mreb/ridge.hpp"
#include "mreb/rng.hpp"
#include "mreb/simulate.hpp"
#include "mreb/types.hpp"
