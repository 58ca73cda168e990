#pragma once

#include "ita/analytics.hpp"
#include "ita/config.hpp"
#include "ita/engine.hpp"
#include "ita/errors.hpp"
#include "ita/metrics.hpp"
#include "ita/netmodel.hpp"
#include "ita/reading.hpp"
#include "ita/rng.hpp"
#include "ita/scenario.hpp"
#include "ita/sim_time.hpp"
#include "ita/sources.hpp"
#include "ita/topology.hpp"
