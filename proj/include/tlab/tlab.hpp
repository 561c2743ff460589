#pragma once

#include "tlab/checks.hpp"
#include "tlab/discrete_geometry.hpp"
#include "tlab/errors.hpp"
#include "tlab/grid.hpp"
#include "tlab/io.hpp"
#include "tlab/soliton_forms.hpp"
#include "tlab/translator_solver.hpp"
