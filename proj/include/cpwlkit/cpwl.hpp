#pragma once

#include "cpwlkit/cpwl/expr.hpp"
#include "cpwlkit/cpwl/pieces.hpp"
#include "cpwlkit/cpwl/sampling.hpp"
#include "cpwlkit/cpwl/text.hpp"
