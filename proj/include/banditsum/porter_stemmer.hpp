#ifndef BANDITSUM_PORTER_STEMMER_HPP
#define BANDITSUM_PORTER_STEMMER_HPP

#include <string>
#include <string_view>

namespace banditsum::rouge {

/// Porter's suffix-stripping stemmer, following his reference C
/// implementation, for lowercase English words. Words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace banditsum::rouge

#endif  // BANDITSUM_PORTER_STEMMER_HPP
