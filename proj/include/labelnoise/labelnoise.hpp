// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_LABELNOISE_HPP
#define LABELNOISE_LABELNOISE_HPP

#include "labelnoise/adam.hpp"
#include "labelnoise/checkpoint.hpp"
#include "labelnoise/config.hpp"
#include "labelnoise/csv.hpp"
#include "labelnoise/dataset.hpp"
#include "labelnoise/gradients.hpp"
#include "labelnoise/idx.hpp"
#include "labelnoise/matrix.hpp"
#include "labelnoise/metrics_io.hpp"
#include "labelnoise/mixup.hpp"
#include "labelnoise/mlp.hpp"
#include "labelnoise/noise.hpp"
#include "labelnoise/outlier.hpp"
#include "labelnoise/report.hpp"
#include "labelnoise/rng.hpp"
#include "labelnoise/standardize.hpp"
#include "labelnoise/stats.hpp"
#include "labelnoise/suite.hpp"
#include "labelnoise/synth.hpp"
#include "labelnoise/trainer.hpp"

#endif
