#pragma once

#include "spectra_lab/error.hpp"
#include "spectra_lab/parallel.hpp"
#include "spectra_lab/sft.hpp"
#include "spectra_lab/dimension.hpp"
#include "spectra_lab/quad_surd.hpp"
#include "spectra_lab/rational.hpp"
#include "spectra_lab/gauss.hpp"
#include "spectra_lab/cantor.hpp"
#include "spectra_lab/spectra.hpp"
