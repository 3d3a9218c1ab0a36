#pragma once

// Umbrella header for the full library.

#include "majorant/asymptotics.hpp"
#include "majorant/config.hpp"
#include "majorant/csv.hpp"
#include "majorant/errors.hpp"
#include "majorant/experiments.hpp"
#include "majorant/models.hpp"
#include "majorant/parallel.hpp"
#include "majorant/processes.hpp"
#include "majorant/quadrature.hpp"
#include "majorant/report_io.hpp"
#include "majorant/rng.hpp"
#include "majorant/stats.hpp"
#include "majorant/step_function.hpp"
