#pragma once

// Gini estimation for heavy-tailed data: direct (empirical) estimators and
// the indirect route through the ML tail exponent, with the exact
// finite-sample distributions of the latter and a deterministic Monte Carlo
// harness comparing the two.

#include "fatgini/dataset.hpp"
#include "fatgini/direct.hpp"
#include "fatgini/distributions.hpp"
#include "fatgini/errors.hpp"
#include "fatgini/experiments.hpp"
#include "fatgini/numerics.hpp"
#include "fatgini/report_io.hpp"
#include "fatgini/rng.hpp"
#include "fatgini/tail_ml.hpp"
