#pragma once

#include "quasitile/checked.hpp"
#include "quasitile/density.hpp"
#include "quasitile/entropy.hpp"
#include "quasitile/error.hpp"
#include "quasitile/finite_subset.hpp"
#include "quasitile/folner.hpp"
#include "quasitile/group.hpp"
#include "quasitile/parallel.hpp"
#include "quasitile/quasitiling.hpp"
#include "quasitile/random.hpp"
#include "quasitile/rational.hpp"
#include "quasitile/symbolic.hpp"
#include "quasitile/tiling.hpp"
#include "quasitile/window.hpp"
