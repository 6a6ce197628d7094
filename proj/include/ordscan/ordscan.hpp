#pragma once

// Umbrella header: point counting, Weil polynomial splitting over imaginary
// quadratic fields, Newton polygons, and the per-prime ordinariness
// classification behind the scan CLI.

#include "ordscan/bigint.hpp"
#include "ordscan/classify.hpp"
#include "ordscan/curve_counts.hpp"
#include "ordscan/errors.hpp"
#include "ordscan/field_arith.hpp"
#include "ordscan/newton.hpp"
#include "ordscan/quad_field.hpp"
#include "ordscan/scan.hpp"
#include "ordscan/weil_oracle.hpp"
