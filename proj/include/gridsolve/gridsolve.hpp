#pragma once

#include "gridsolve/assembly.hpp"
#include "gridsolve/config.hpp"
#include "gridsolve/csv_io.hpp"
#include "gridsolve/errors.hpp"
#include "gridsolve/experiment.hpp"
#include "gridsolve/grid.hpp"
#include "gridsolve/plots.hpp"
#include "gridsolve/solvers.hpp"
#include "gridsolve/sparse.hpp"
#include "gridsolve/spectral.hpp"
