#pragma once

#include "thinfilm/config.hpp"
#include "thinfilm/harness.hpp"
#include "thinfilm/inner_ode.hpp"
#include "thinfilm/io.hpp"
#include "thinfilm/model.hpp"
#include "thinfilm/pde_solver.hpp"
