#pragma once

#include "tfadapt/adapt.hpp"
#include "tfadapt/entropy.hpp"
#include "tfadapt/fft.hpp"
#include "tfadapt/multiframe.hpp"
#include "tfadapt/resynth.hpp"
#include "tfadapt/signal.hpp"
#include "tfadapt/stft.hpp"
#include "tfadapt/wav.hpp"
#include "tfadapt/window.hpp"
