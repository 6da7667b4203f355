#pragma once

#include "strich/clustering.hpp"
#include "strich/errors.hpp"
#include "strich/io.hpp"
#include "strich/pipeline.hpp"
#include "strich/profiles.hpp"
#include "strich/richclub.hpp"
#include "strich/rng.hpp"
#include "strich/stream_graph.hpp"
#include "strich/synth.hpp"
#include "strich/topology.hpp"
#include "strich/version.hpp"
