#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "kframe/core.hpp"

// Seeded generators for matrices, unitaries and frames. Every caller passes
// the engine (or a seed) explicitly, so identical calls reproduce identical
// values and concurrent calls never interfere.

namespace kframe {

using Rng = std::mt19937_64;

/// Matrix of iid standard complex Gaussians.
Mat gaussian_matrix(Rng& rng, Index rows, Index cols);

/// Haar-distributed unitary via QR with positive diagonal of R.
Mat haar_unitary(Rng& rng, Index n);

/// Uniformly random unit vector.
Vec random_unit_vector(Rng& rng, Index n);

/// Builds an n x n operator from a textual spec:
///   identity | diag:<csv> | random | scaled-unitary:<c> | projection:<r>
Mat operator_from_spec(const std::string& spec, Index n, Rng& rng);

}  // namespace kframe
