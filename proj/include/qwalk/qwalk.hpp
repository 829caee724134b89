#pragma once

// Umbrella header.

#include "qwalk/boundstate.hpp"
#include "qwalk/cli.hpp"
#include "qwalk/core.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/io.hpp"
#include "qwalk/localization.hpp"
#include "qwalk/oracle.hpp"
