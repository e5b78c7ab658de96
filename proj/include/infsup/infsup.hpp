#pragma once

// Umbrella header: stability and error-bound certification for
// finite-dimensional asymmetric saddle-point systems.

#include <infsup/types.hpp>
#include <infsup/space.hpp>
#include <infsup/operators.hpp>
#include <infsup/constants.hpp>
#include <infsup/saddle.hpp>
#include <infsup/bounds.hpp>
#include <infsup/random.hpp>
#include <infsup/problems.hpp>
#include <infsup/matrix_market.hpp>
#include <infsup/manifest.hpp>
#include <infsup/report.hpp>
#include <infsup/selftest.hpp>
