// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pilotreuse/types.hpp"
#include "pilotreuse/rng.hpp"
#include "pilotreuse/config.hpp"
#include "pilotreuse/scenario.hpp"
#include "pilotreuse/channel.hpp"
#include "pilotreuse/features.hpp"
#include "pilotreuse/assignment.hpp"
#include "pilotreuse/phy.hpp"
#include "pilotreuse/metrics.hpp"
#include "pilotreuse/io.hpp"
#include "pilotreuse/harness.hpp"
#include "pilotreuse/oracle.hpp"
