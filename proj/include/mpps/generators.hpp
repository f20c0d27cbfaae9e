#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpps/precision.hpp"

namespace mpps {

// A(i,j) = 1/(i+j), 1-based.
MPMatrix gen_cauchy(int n, const PrecisionCtx& ctx);

// The 3x3 integer matrix [[-131,19,18],[-390,56,54],[-387,57,52]].
MPMatrix gen_ward(const PrecisionCtx& ctx);

// [[-0.1, 1e6], [0, -0.1]].
MPMatrix gen_nonnormal2(const PrecisionCtx& ctx);

// Strictly upper triangular, standard normal entries times `scale`.
MPMatrix gen_triu_rand(int n, double scale, std::uint64_t seed, const PrecisionCtx& ctx);

// Hilbert matrix 1/(i+j-1) with the first row set to ones.
MPMatrix gen_lotkin(int n, const PrecisionCtx& ctx);

// Complex: diagonal exp(2 pi i k/n), superdiagonal ones, A(n,1) = 1.
MPMatrix gen_smoke(int n, const PrecisionCtx& ctx);

// Deterministic standard normal variates: mt19937_64 + Box-Muller.
std::vector<double> normal_variates(std::size_t count, std::uint64_t seed);

std::vector<std::string> generator_names();

}  // namespace mpps
