#pragma once

#include "fourbar/types.hpp"
#include "fourbar/linalg.hpp"
#include "fourbar/model.hpp"
#include "fourbar/centroidal.hpp"
#include "fourbar/constrained.hpp"
#include "fourbar/wrench_resolution.hpp"
#include "fourbar/scop.hpp"
#include "fourbar/analysis.hpp"
