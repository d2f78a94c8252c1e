#pragma once

#include "isac/core/config.hpp"
#include "isac/core/constants.hpp"
#include "isac/core/error.hpp"
#include "isac/core/gains.hpp"
#include "isac/core/parallel.hpp"
#include "isac/core/rng.hpp"
#include "isac/kinematics/motion.hpp"
#include "isac/kinematics/rcs.hpp"
#include "isac/channel/clutter.hpp"
#include "isac/channel/received.hpp"
#include "isac/channel/target.hpp"
#include "isac/channel/taps.hpp"
#include "isac/dsp/chirp.hpp"
#include "isac/dsp/fft.hpp"
#include "isac/dsp/image.hpp"
#include "isac/dsp/slow_time.hpp"
#include "isac/dsp/stft.hpp"
#include "isac/sim/pipeline.hpp"
#include "isac/calibration/fit_rho.hpp"
#include "isac/calibration/kl.hpp"
#include "isac/recognition/classifier.hpp"
#include "isac/recognition/dataset.hpp"
#include "isac/curvefit/families.hpp"
#include "isac/curvefit/fit.hpp"
#include "isac/tradeoff/allocation.hpp"
#include "isac/tradeoff/region.hpp"
