#pragma once

#include "bitstring.hpp"
#include "clusters.hpp"
#include "compat.hpp"
#include "consensus.hpp"
#include "newick.hpp"
#include "oracles.hpp"
#include "smith_tag.hpp"
#include "tag.hpp"
#include "tree.hpp"
