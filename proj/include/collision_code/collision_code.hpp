#pragma once

#include "bitstream.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "decoder.hpp"
#include "errors.hpp"
#include "protocol.hpp"
#include "rng.hpp"
#include "verifier.hpp"
