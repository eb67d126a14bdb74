// sbparity.hpp — umbrella header

#pragma once

#include "sbparity/bath.hpp"
#include "sbparity/eigensolver.hpp"
#include "sbparity/errors.hpp"
#include "sbparity/fockspace.hpp"
#include "sbparity/hamiltonian.hpp"
#include "sbparity/numeric.hpp"
#include "sbparity/parity.hpp"
#include "sbparity/spectra.hpp"
#include "sbparity/symmetric_matrix.hpp"
