#ifndef UDIRONY_UNICODE_H_
#define UDIRONY_UNICODE_H_

#include <string>
#include <string_view>

namespace udirony {

// Unicode simple lowercase mapping over UTF-8 text. Covers Basic Latin,
// Latin-1 Supplement, Latin Extended-A, Greek and Cyrillic; other code points
// and invalid bytes pass through unchanged.
std::string to_lower_utf8(std::string_view text);

}  // namespace udirony

#endif  // UDIRONY_UNICODE_H_
