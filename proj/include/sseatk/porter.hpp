#pragma once

#include <string>
#include <string_view>

namespace sseatk {

// Porter's 1980 suffix-stripping algorithm, as published (steps 1a-5b with
// the m-measure conditions). Input must already be lowercase a-z. Words of
// length 1 or 2 are returned unchanged, as in the common reference
// implementations used by NLP toolkits.
std::string porter_stem(std::string_view word);

}  // namespace sseatk
