#pragma once

#include "spherefft/common.hpp"
#include "spherefft/cubature.hpp"
#include "spherefft/gauss_legendre.hpp"
#include "spherefft/grid.hpp"
#include "spherefft/harmonics.hpp"
#include "spherefft/hypothesis.hpp"
#include "spherefft/interpolant.hpp"
#include "spherefft/norms.hpp"
#include "spherefft/transforms.hpp"
