#pragma once

#include "nrdyn/embedding.hpp"
#include "nrdyn/errors.hpp"
#include "nrdyn/numrange.hpp"
#include "nrdyn/partition.hpp"
#include "nrdyn/polynomial.hpp"
#include "nrdyn/ratmap.hpp"
#include "nrdyn/symdyn.hpp"
