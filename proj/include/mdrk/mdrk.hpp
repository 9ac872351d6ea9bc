#pragma once

// Everything except the command-line front end.

#include "mdrk/experiments.hpp"
#include "mdrk/integrator.hpp"
#include "mdrk/methods.hpp"
#include "mdrk/optimizer.hpp"
#include "mdrk/order_conditions.hpp"
#include "mdrk/spatial.hpp"
#include "mdrk/ssp_analysis.hpp"
#include "mdrk/tableau.hpp"
