#pragma once

#include "scnet/errors.hpp"
#include "scnet/constraints.hpp"
#include "scnet/constraint_io.hpp"
#include "scnet/ordergraph.hpp"
#include "scnet/toposort.hpp"
#include "scnet/dnf.hpp"
#include "scnet/sclayer.hpp"
#include "scnet/batched.hpp"
#include "scnet/vectorized.hpp"
#include "scnet/synth.hpp"
#include "scnet/dense.hpp"
#include "scnet/csv.hpp"
