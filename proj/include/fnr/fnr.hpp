#pragma once

#include "fnr/arc.hpp"
#include "fnr/closedform.hpp"
#include "fnr/errors.hpp"
#include "fnr/exactpoly.hpp"
#include "fnr/oracle.hpp"
#include "fnr/resultant.hpp"
#include "fnr/tolerances.hpp"
