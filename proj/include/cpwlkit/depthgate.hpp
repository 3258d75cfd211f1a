#pragma once

#include "cpwlkit/depthgate/bnb.hpp"
#include "cpwlkit/depthgate/mip.hpp"
#include "cpwlkit/depthgate/mps.hpp"
#include "cpwlkit/depthgate/rays.hpp"
#include "cpwlkit/depthgate/verify.hpp"
