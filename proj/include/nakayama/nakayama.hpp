// Umbrella header for the library modules (the CLI lives in cli.hpp).
#pragma once

#include "errors.hpp"
#include "exactlin.hpp"
#include "algebra.hpp"
#include "modrep.hpp"
#include "homology.hpp"
#include "ortho.hpp"
