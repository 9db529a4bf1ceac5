#pragma once

#include "fdid/corrections.hpp"
#include "fdid/error.hpp"
#include "fdid/experiments.hpp"
#include "fdid/fft.hpp"
#include "fdid/identify.hpp"
#include "fdid/io.hpp"
#include "fdid/metrics.hpp"
#include "fdid/model.hpp"
#include "fdid/parallel.hpp"
#include "fdid/quadrature.hpp"
#include "fdid/random.hpp"
#include "fdid/rational.hpp"
#include "fdid/signal.hpp"
#include "fdid/simulate.hpp"
#include "fdid/spectral.hpp"
#include "fdid/window.hpp"
