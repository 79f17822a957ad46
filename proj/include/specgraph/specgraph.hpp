#pragma once

#include "specgraph/error.hpp"
#include "specgraph/graph.hpp"
#include "specgraph/reduction.hpp"
#include "specgraph/spectra.hpp"
#include "specgraph/complexity.hpp"
#include "specgraph/cycleclust.hpp"
#include "specgraph/baselines.hpp"
#include "specgraph/export.hpp"
#include "specgraph/analysis.hpp"
