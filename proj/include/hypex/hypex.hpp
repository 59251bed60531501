#pragma once

#include "budget.hpp"
#include "constructions.hpp"
#include "error.hpp"
#include "hypergraph.hpp"
#include "io.hpp"
#include "numbers.hpp"
#include "patterns.hpp"
#include "turan.hpp"
