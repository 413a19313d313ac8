#pragma once

// Umbrella header: the whole exact interval exchange toolkit.

#include "iet/basis.hpp"
#include "iet/chains.hpp"
#include "iet/exact_real.hpp"
#include "iet/exchange.hpp"
#include "iet/first_return.hpp"
#include "iet/json_io.hpp"
#include "iet/linalg.hpp"
#include "iet/permutation.hpp"
#include "iet/rational.hpp"
#include "iet/roots.hpp"
#include "iet/three_iet.hpp"
#include "iet/tower.hpp"
