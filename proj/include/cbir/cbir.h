#pragma once

#include "cbir/error.h"
#include "cbir/eval.h"
#include "cbir/features.h"
#include "cbir/image_io.h"
#include "cbir/lbp.h"
#include "cbir/moments.h"
#include "cbir/retrieval.h"
