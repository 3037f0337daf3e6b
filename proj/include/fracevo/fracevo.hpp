#pragma once

#include "fracevo/error.hpp"
#include "fracevo/special.hpp"
#include "fracevo/weight.hpp"
#include "fracevo/symbols.hpp"
#include "fracevo/laplace.hpp"
#include "fracevo/kernels.hpp"
#include "fracevo/generators.hpp"
#include "fracevo/parallel.hpp"
#include "fracevo/solvers.hpp"
