// Umbrella header.

#pragma once

#include "epi/families.hpp"
#include "epi/io.hpp"
#include "epi/linalg.hpp"
#include "epi/measures.hpp"
#include "epi/parallel.hpp"
#include "epi/polytope.hpp"
#include "epi/rng.hpp"
#include "epi/state.hpp"
#include "epi/verifier.hpp"
