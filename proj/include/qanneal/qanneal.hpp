#pragma once

#include "classical.hpp"
#include "config.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "netlang.hpp"
#include "network.hpp"
#include "one_way.hpp"
#include "particle_link.hpp"
#include "projector.hpp"
#include "random.hpp"
#include "state_vector.hpp"
#include "trace.hpp"
#include "two_way.hpp"
