#pragma once

#include "evidfuse/error.hpp"
#include "evidfuse/frame.hpp"
#include "evidfuse/fusion_rules.hpp"
#include "evidfuse/fuzzy_operators.hpp"
#include "evidfuse/mass_function.hpp"
#include "evidfuse/monte_carlo.hpp"
#include "evidfuse/random.hpp"
#include "evidfuse/type_tracker.hpp"
