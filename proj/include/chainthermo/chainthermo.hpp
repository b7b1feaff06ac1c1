#pragma once

// Umbrella header.

#include "chainthermo/errors.hpp"
#include "chainthermo/chain_model.hpp"
#include "chainthermo/gibbs.hpp"
#include "chainthermo/fermion.hpp"
#include "chainthermo/metrology.hpp"
#include "chainthermo/peaks.hpp"
#include "chainthermo/csv.hpp"
#include "chainthermo/scenario.hpp"
#include "chainthermo/config.hpp"
#include "chainthermo/svg.hpp"
#include "chainthermo/optimize.hpp"
#include "chainthermo/presets.hpp"
