#pragma once

// Everything.

#include "vasym/colombeau.hpp"
#include "vasym/config.hpp"
#include "vasym/estimator.hpp"
#include "vasym/json.hpp"
#include "vasym/numeric_expand.hpp"
#include "vasym/parse.hpp"
#include "vasym/print.hpp"
#include "vasym/quadrature.hpp"
#include "vasym/rmt.hpp"
#include "vasym/series.hpp"
#include "vasym/valuation.hpp"
#include "vasym/vspace.hpp"
