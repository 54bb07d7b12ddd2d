#pragma once

// Umbrella header: the whole library in dependency order.

#include "spinor/constants.hpp"
#include "spinor/errors.hpp"
#include "spinor/matrix.hpp"
#include "spinor/rng.hpp"
#include "spinor/state.hpp"

#include "spinor/oracle.hpp"
#include "spinor/propagator.hpp"

#include "spinor/multispin.hpp"
#include "spinor/suscept.hpp"

#include "spinor/spectra.hpp"

#include "spinor/experiments.hpp"

#include "spinor/compiler.hpp"
#include "spinor/engine.hpp"
#include "spinor/sequence.hpp"

#include "spinor/io.hpp"
#include "spinor/validate.hpp"
