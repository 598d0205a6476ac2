#pragma once

#include "setrisk/core.hpp"
#include "setrisk/duality.hpp"
#include "setrisk/error.hpp"
#include "setrisk/lab.hpp"
#include "setrisk/linprog.hpp"
#include "setrisk/riskbase.hpp"
#include "setrisk/rng.hpp"
#include "setrisk/srm.hpp"
