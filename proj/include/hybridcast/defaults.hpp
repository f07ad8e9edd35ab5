#pragma once

#include <string_view>

namespace hybridcast {

/// Contents of data/lexicon.tsv, compiled in.
std::string_view default_lexicon_text();

/// Contents of data/source_weights.tsv, compiled in.
std::string_view default_weights_text();

}  // namespace hybridcast
