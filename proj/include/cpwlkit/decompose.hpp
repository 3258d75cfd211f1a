#pragma once

#include "cpwlkit/decompose/convexify.hpp"
#include "cpwlkit/decompose/reduce.hpp"
