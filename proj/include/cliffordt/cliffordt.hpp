#pragma once

#include "cliffordt/analysis.hpp"
#include "cliffordt/circuits.hpp"
#include "cliffordt/colormap.hpp"
#include "cliffordt/cooling.hpp"
#include "cliffordt/entanglement.hpp"
#include "cliffordt/errors.hpp"
#include "cliffordt/ess.hpp"
#include "cliffordt/rng.hpp"
#include "cliffordt/statevector.hpp"
