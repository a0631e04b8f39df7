#pragma once

#include "cnbt/error.hpp"
#include "cnbt/graph.hpp"
#include "cnbt/matrices.hpp"
#include "cnbt/walks.hpp"
#include "cnbt/eigensolver.hpp"
#include "cnbt/spectral.hpp"
#include "cnbt/kmeans.hpp"
#include "cnbt/metrics.hpp"
#include "cnbt/clustering.hpp"
#include "cnbt/sbm.hpp"
#include "cnbt/bp.hpp"
#include "cnbt/io.hpp"
#include "cnbt/experiment.hpp"
