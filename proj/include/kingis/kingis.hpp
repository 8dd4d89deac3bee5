#pragma once

#include "kingis/bigcount.hpp"
#include "kingis/catalog.hpp"
#include "kingis/errors.hpp"
#include "kingis/estimate.hpp"
#include "kingis/grid.hpp"
#include "kingis/kinggraph.hpp"
#include "kingis/profile_dp.hpp"
#include "kingis/wang_engine.hpp"
#include "kingis/wang_tiles.hpp"
