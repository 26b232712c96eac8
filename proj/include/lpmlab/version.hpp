#pragma once

namespace lpmlab {

inline constexpr const char* kVersion = "0.1.0";

// Major.minor for every artifact this library writes; readers reject
// unknown majors.
inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

}  // namespace lpmlab
