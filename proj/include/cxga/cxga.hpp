#pragma once

#include "cxga/bench.hpp"
#include "cxga/engine.hpp"
#include "cxga/error.hpp"
#include "cxga/hrx.hpp"
#include "cxga/operators.hpp"
#include "cxga/oracle.hpp"
#include "cxga/random.hpp"
#include "cxga/tour.hpp"
#include "cxga/tsplib.hpp"
