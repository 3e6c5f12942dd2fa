#pragma once

#include "halfgrid/grid.hpp"
#include "halfgrid/spectral.hpp"
#include "halfgrid/wigner.hpp"
#include "halfgrid/weyl.hpp"
#include "halfgrid/gspmodel.hpp"
#include "halfgrid/analysis.hpp"
#include "halfgrid/montecarlo.hpp"
