#pragma once

#include "wattbench/stats/correlation.hpp"
#include "wattbench/stats/descriptive.hpp"
#include "wattbench/stats/distributions.hpp"
#include "wattbench/stats/effect_size.hpp"
#include "wattbench/stats/rank_tests.hpp"
#include "wattbench/stats/ranks.hpp"
#include "wattbench/stats/shapiro_wilk.hpp"
