#pragma once

#include "corridor/cost_model.hpp"
#include "corridor/demand.hpp"
#include "corridor/error.hpp"
#include "corridor/numeric.hpp"
#include "corridor/optimizer.hpp"
#include "corridor/policy.hpp"
#include "corridor/scenario.hpp"
#include "corridor/scenario_io.hpp"
#include "corridor/scheduler.hpp"
#include "corridor/stochastic.hpp"
#include "corridor/threshold.hpp"
