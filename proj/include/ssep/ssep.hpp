#pragma once

#include "ssep/coherence.hpp"
#include "ssep/errors.hpp"
#include "ssep/experiment.hpp"
#include "ssep/guarantees.hpp"
#include "ssep/image.hpp"
#include "ssep/io.hpp"
#include "ssep/linear_operator.hpp"
#include "ssep/matrix.hpp"
#include "ssep/operators.hpp"
#include "ssep/problems.hpp"
#include "ssep/rng.hpp"
#include "ssep/solver.hpp"
#include "ssep/sparsity.hpp"
