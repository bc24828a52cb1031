#pragma once

#include "twoarm/core_types.hpp"
#include "twoarm/deviation_lab.hpp"
#include "twoarm/montecarlo.hpp"
#include "twoarm/parallel.hpp"
#include "twoarm/policies.hpp"
#include "twoarm/random.hpp"
#include "twoarm/special_functions.hpp"
#include "twoarm/theory.hpp"
