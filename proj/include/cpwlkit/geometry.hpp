#pragma once

#include "cpwlkit/geometry/newton.hpp"
#include "cpwlkit/geometry/pointset.hpp"
