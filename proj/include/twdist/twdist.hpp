#pragma once

#include "twdist/error.hpp"
#include "twdist/graph.hpp"
#include "twdist/treewidth.hpp"
#include "twdist/json_io.hpp"
#include "twdist/phylo.hpp"
#include "twdist/newick.hpp"
#include "twdist/display_graph.hpp"
#include "twdist/reductions.hpp"
#include "twdist/distances.hpp"
#include "twdist/instances.hpp"
#include "twdist/constructions.hpp"
#include "twdist/display_check.hpp"
#include "twdist/verify.hpp"
