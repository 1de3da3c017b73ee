#pragma once

#include "gskdet/asymptotics.hpp"
#include "gskdet/cli.hpp"
#include "gskdet/config.hpp"
#include "gskdet/contour.hpp"
#include "gskdet/expr.hpp"
#include "gskdet/kernel.hpp"
#include "gskdet/mat2.hpp"
#include "gskdet/problem.hpp"
#include "gskdet/quadrature.hpp"
#include "gskdet/rhp_local.hpp"
#include "gskdet/rhp_solver.hpp"
#include "gskdet/scalar.hpp"
#include "gskdet/selftest.hpp"
#include "gskdet/special_functions.hpp"
