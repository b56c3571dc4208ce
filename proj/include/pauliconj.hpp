#pragma once

#include "pauliconj/pauli.hpp"
#include "pauliconj/codes.hpp"
#include "pauliconj/ptm.hpp"
#include "pauliconj/channel_sim.hpp"
#include "pauliconj/tailoring.hpp"
#include "pauliconj/concatenation.hpp"
#include "pauliconj/multiround.hpp"
#include "pauliconj/circuit_noise.hpp"
