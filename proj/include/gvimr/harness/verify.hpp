#pragma once

#include "gvimr/harness/report.hpp"

#include <cstddef>
#include <cstdint>

namespace gvimr::harness {

/// Randomized self-check of the inequalities the solver relies on: inner
/// product identities, projection characterizations, ||I - rho B|| bounds on
/// random SPD matrices, inner-map contraction factors and the scalar
/// sequence lemma. Every sampler is seeded from `seed`; `trials` >= 1.
VerificationReport verify_lemmas(std::uint64_t seed, std::size_t trials);

/// Steps n >= 1 until a_{n+1} = (1 - b_n) a_n + b_n / n, b_n = 1/(n+1),
/// a_1 = 1 falls below `threshold`; `limit` + 1 when it never does.
std::size_t sequence_lemma_steps(double threshold, std::size_t limit);

} // namespace gvimr::harness
