#pragma once

#include "conflict.hpp"
#include "errors.hpp"
#include "explore.hpp"
#include "generator.hpp"
#include "io.hpp"
#include "multiset.hpp"
#include "net.hpp"
#include "oracle_suite.hpp"
#include "process.hpp"
#include "swap.hpp"
#include "traces.hpp"
#include "verdict.hpp"
