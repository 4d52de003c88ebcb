#pragma once

#include "relaylim/specfun.hpp"
#include "relaylim/quadrature.hpp"
#include "relaylim/model.hpp"
#include "relaylim/scenario_io.hpp"
#include "relaylim/outage.hpp"
#include "relaylim/capacity.hpp"
#include "relaylim/asymptotics.hpp"
#include "relaylim/rng.hpp"
#include "relaylim/montecarlo.hpp"
#include "relaylim/sweep.hpp"
#include "relaylim/figures.hpp"
#include "relaylim/validate.hpp"
