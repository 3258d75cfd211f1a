#pragma once

#include "cpwlkit/compile/compiler.hpp"
#include "cpwlkit/compile/max_tree.hpp"
#include "cpwlkit/compile/network.hpp"
