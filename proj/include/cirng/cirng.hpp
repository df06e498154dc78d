#pragma once

#include "bit_vector.hpp"
#include "chaotic.hpp"
#include "xorshift.hpp"

#include "stats/battery.hpp"
#include "stats/gf2.hpp"
#include "stats/special.hpp"
#include "stats/tests.hpp"
#include "stats/word_source.hpp"

#include "imaging/attacks.hpp"
#include "imaging/image.hpp"
#include "imaging/netpbm.hpp"
#include "imaging/random.hpp"
#include "imaging/synthetic.hpp"

#include "watermark/sweep.hpp"
#include "watermark/watermark.hpp"
