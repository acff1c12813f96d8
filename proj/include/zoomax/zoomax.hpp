#pragma once

#include "zoomax/contractions.hpp"
#include "zoomax/core.hpp"
#include "zoomax/ergodic.hpp"
#include "zoomax/errors.hpp"
#include "zoomax/families.hpp"
#include "zoomax/potential.hpp"
#include "zoomax/rng.hpp"
#include "zoomax/shift.hpp"
#include "zoomax/spec_strings.hpp"
#include "zoomax/zooming.hpp"
