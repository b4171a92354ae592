#pragma once

#include "ontic/cone_model.hpp"
#include "ontic/config.hpp"
#include "ontic/dynamics.hpp"
#include "ontic/geometry.hpp"
#include "ontic/harness.hpp"
#include "ontic/icosa.hpp"
#include "ontic/message.hpp"
#include "ontic/ndim_model.hpp"
#include "ontic/protocol.hpp"
#include "ontic/report.hpp"
#include "ontic/rng.hpp"
#include "ontic/stats.hpp"
