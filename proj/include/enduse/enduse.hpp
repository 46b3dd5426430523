#pragma once

#include "enduse/core/errors.hpp"
#include "enduse/core/random.hpp"
#include "enduse/core/time_grid.hpp"
#include "enduse/estimation/correlation.hpp"
#include "enduse/estimation/durations.hpp"
#include "enduse/estimation/empirical.hpp"
#include "enduse/estimation/probability_profile.hpp"
#include "enduse/estimation/rou.hpp"
#include "enduse/estimation/slots.hpp"
#include "enduse/estimation/smoothing.hpp"
#include "enduse/ingest/csv.hpp"
#include "enduse/ingest/demo_profiles.hpp"
#include "enduse/ingest/state_series.hpp"
#include "enduse/ingest/synthetic.hpp"
#include "enduse/ingest/transforms.hpp"
#include "enduse/simulation/appliance.hpp"
#include "enduse/simulation/building.hpp"
#include "enduse/simulation/engine.hpp"
#include "enduse/simulation/recursion.hpp"
#include "enduse/simulation/variance.hpp"
