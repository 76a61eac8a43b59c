#ifndef UDIRONY_VERSION_H_
#define UDIRONY_VERSION_H_

namespace udirony {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace udirony

#endif  // UDIRONY_VERSION_H_
