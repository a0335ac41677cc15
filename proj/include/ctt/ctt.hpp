#pragma once

#include "ctt/common.hpp"
#include "ctt/network.hpp"
#include "ctt/instance.hpp"
#include "ctt/chains.hpp"
#include "ctt/milp.hpp"
#include "ctt/lp_format.hpp"
#include "ctt/simplex.hpp"
#include "ctt/solver.hpp"
#include "ctt/instance_io.hpp"
#include "ctt/fixtures.hpp"
#include "ctt/generator.hpp"
#include "ctt/report.hpp"
