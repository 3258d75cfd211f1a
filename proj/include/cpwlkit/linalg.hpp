#pragma once

#include "cpwlkit/linalg/json.hpp"
#include "cpwlkit/linalg/matrix.hpp"
#include "cpwlkit/linalg/rational.hpp"
#include "cpwlkit/linalg/simplex.hpp"
#include "cpwlkit/linalg/solve.hpp"
