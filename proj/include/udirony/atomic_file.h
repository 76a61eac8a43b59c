#ifndef UDIRONY_ATOMIC_FILE_H_
#define UDIRONY_ATOMIC_FILE_H_

#include <string>
#include <string_view>

namespace udirony {

// Writes `contents` to `path` through a temporary sibling file followed by a
// rename, so readers never observe a truncated file at `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

}  // namespace udirony

#endif  // UDIRONY_ATOMIC_FILE_H_
