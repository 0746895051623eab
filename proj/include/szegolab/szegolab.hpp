#pragma once

#include <szegolab/errors.hpp>
#include <szegolab/seq_core.hpp>
#include <szegolab/dense.hpp>
#include <szegolab/fft.hpp>
#include <szegolab/levinson.hpp>
#include <szegolab/szego.hpp>
#include <szegolab/limits.hpp>
#include <szegolab/models.hpp>
#include <szegolab/classify.hpp>
