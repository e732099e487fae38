#pragma once

#include "geomlex/error.hpp"
#include "geomlex/rng.hpp"
#include "geomlex/report.hpp"
#include "geomlex/corpus.hpp"
#include "geomlex/geometry.hpp"
#include "geomlex/discrimination.hpp"
#include "geomlex/phonology.hpp"
#include "geomlex/stats.hpp"
#include "geomlex/objectives.hpp"
#include "geomlex/synth.hpp"
