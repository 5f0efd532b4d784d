#ifndef MARGLIK_VERSION_HPP
#define MARGLIK_VERSION_HPP

namespace marglik {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportFormatVersion = 1;

} // namespace marglik

#endif
