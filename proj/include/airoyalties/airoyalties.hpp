#pragma once

#include "airoyalties/embedstore.hpp"
#include "airoyalties/error.hpp"
#include "airoyalties/influence.hpp"
#include "airoyalties/metric.hpp"
#include "airoyalties/money.hpp"
#include "airoyalties/rulings.hpp"
#include "airoyalties/scenario.hpp"
#include "airoyalties/schemes.hpp"
