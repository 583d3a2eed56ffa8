#pragma once

#include "alertzone/bench/config.hpp"
#include "alertzone/bench/experiment.hpp"
#include "alertzone/bench/workload.hpp"
#include "alertzone/core/random.hpp"
#include "alertzone/dynamics/lazy_chain.hpp"
#include "alertzone/dynamics/markov.hpp"
#include "alertzone/encoding/baselines.hpp"
#include "alertzone/encoding/encoding.hpp"
#include "alertzone/encoding/grid.hpp"
#include "alertzone/encoding/optimizers.hpp"
#include "alertzone/gray/codeword.hpp"
#include "alertzone/gray/gray.hpp"
#include "alertzone/hve/hve.hpp"
#include "alertzone/hve/modular.hpp"
#include "alertzone/hve/reference_group.hpp"
#include "alertzone/hve/serialize.hpp"
#include "alertzone/tokens/minimize.hpp"
