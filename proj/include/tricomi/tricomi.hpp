#pragma once

#include "tricomi/errors.hpp"
#include "tricomi/specfun.hpp"
#include "tricomi/params.hpp"
#include "tricomi/quadrature.hpp"
#include "tricomi/kernel.hpp"
#include "tricomi/wave.hpp"
#include "tricomi/grid.hpp"
#include "tricomi/transform.hpp"
#include "tricomi/verify.hpp"
