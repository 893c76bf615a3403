#pragma once

#include "hausdorff/linalg.hpp"
#include "hausdorff/sequence.hpp"
#include "hausdorff/hankel.hpp"
#include "hausdorff/fparam.hpp"
#include "hausdorff/transforms.hpp"
#include "hausdorff/measures.hpp"
