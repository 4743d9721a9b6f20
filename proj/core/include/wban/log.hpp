#pragma once

#include <functional>
#include <string_view>

namespace wban {

using WarningSink = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink; returns the previous one.
/// The default sink writes "warning: <msg>" to stderr.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace wban
