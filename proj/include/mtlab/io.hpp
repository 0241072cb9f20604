#pragma once

#include <string>

#include "mtlab/profile.hpp"

namespace mtlab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// CSV schema: header "t,r,value", LF line endings, 17 significant digits.
void write_profile_csv(const std::string& path, const RadialProfile& u);

/// Reads a profile back; the dimension is inferred from the (t, r) columns,
/// which must satisfy r = e^{-t/N} for an integer N >= 2.
RadialProfile read_profile_csv(const std::string& path);

}  // namespace mtlab
