#pragma once

#include "congestion.hpp"
#include "dominance.hpp"
#include "dynamics.hpp"
#include "engine.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "game.hpp"
#include "information.hpp"
#include "profile.hpp"
#include "rng.hpp"

#include "analysis/adjusted.hpp"
#include "analysis/bounds.hpp"
#include "analysis/extinction.hpp"
#include "analysis/generator.hpp"
#include "analysis/lyapunov.hpp"
#include "analysis/potential.hpp"
#include "analysis/sampling.hpp"
#include "analysis/stability.hpp"
