#pragma once

#include <string>
#include <string_view>

#include "etas/inference.hpp"

namespace etas {

// Key-value text serialization of a fit. Deterministic: same result, same
// bytes. The summary block is computed from `summary_draws` posterior samples
// with `summary_seed`.
std::string write_result(const PosteriorResult& result, std::size_t summary_draws = 10000,
                         std::uint64_t summary_seed = 1);

// Parses write_result output back into a PosteriorResult (trace included).
PosteriorResult read_result(std::string_view text);

}  // namespace etas
