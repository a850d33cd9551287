#pragma once
// Convenience header pulling in the whole library.

#include "eig.hpp"
#include "exclusion.hpp"
#include "free_sets.hpp"
#include "info_metrics.hpp"
#include "json_io.hpp"
#include "matrix.hpp"
#include "quantifiers.hpp"
#include "random.hpp"
#include "sdp.hpp"
#include "subchannel.hpp"
#include "tensor.hpp"
#include "verify.hpp"
