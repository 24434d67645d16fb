#pragma once

#include "genmetric/errors.hpp"
#include "genmetric/activation_set.hpp"
#include "genmetric/actb.hpp"
#include "genmetric/metric_report.hpp"
#include "genmetric/frechet_gaussian.hpp"
#include "genmetric/divergence.hpp"
#include "genmetric/wasserstein.hpp"
#include "genmetric/mmd.hpp"
#include "genmetric/discrete_frechet.hpp"
#include "genmetric/lfid.hpp"
#include "genmetric/monitor.hpp"
#include "genmetric/tuning.hpp"
#include "genmetric/external.hpp"
#include "genmetric/adam.hpp"
#include "genmetric/toy_generator.hpp"
#include "genmetric/run_report.hpp"
#include "genmetric/plot.hpp"
#include "genmetric/pipeline.hpp"
