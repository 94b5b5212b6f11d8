#pragma once

#include "bernergy/cmfun.hpp"
#include "bernergy/energy.hpp"
#include "bernergy/error.hpp"
#include "bernergy/parallel.hpp"
#include "bernergy/pointcloud.hpp"
#include "bernergy/quadrature.hpp"
#include "bernergy/random.hpp"
#include "bernergy/spaces.hpp"
#include "bernergy/stats.hpp"
#include "bernergy/verify.hpp"
#include "bernergy/version.hpp"
