#pragma once

// Umbrella header: channel uncertainty from the state-weighted absolute
// variance, its lower bounds, and the supporting model types.

#include "chanvar/linalg.hpp"
#include "chanvar/state.hpp"
#include "chanvar/channel.hpp"
#include "chanvar/variance.hpp"
#include "chanvar/random.hpp"
#include "chanvar/properties.hpp"
#include "chanvar/bounds.hpp"
#include "chanvar/io.hpp"
#include "chanvar/sweep.hpp"
