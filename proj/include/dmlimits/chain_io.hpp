#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "dmlimits/finite_chain.hpp"

namespace dmlimits {

inline constexpr double kLoadRowTolerance = 1e-9;

// {"labels": [...], "P": [[...], ...]}; labels optional.
FiniteChain load_chain_json(std::istream& in);

// One row per line, comma separated. An optional first line of non-numeric
// fields is taken as state labels.
FiniteChain load_chain_csv(std::istream& in);

// Dispatches on extension: .json, otherwise CSV.
FiniteChain load_chain_file(const std::filesystem::path& path);

// Round-trip exact JSON.
std::string chain_to_json(const FiniteChain& chain);
void save_chain_json(const FiniteChain& chain, const std::filesystem::path& path);

}  // namespace dmlimits
