#pragma once

#include "designwalk/design.hpp"
#include "designwalk/graph.hpp"
#include "designwalk/linalg.hpp"
#include "designwalk/rng.hpp"
#include "designwalk/sampling.hpp"
#include "designwalk/serialize.hpp"
#include "designwalk/simplex.hpp"
#include "designwalk/spectral.hpp"
#include "designwalk/walk.hpp"
