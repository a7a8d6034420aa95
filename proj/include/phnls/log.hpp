#pragma once

#include <functional>
#include <string_view>

namespace phnls {

using WarningSink = std::function<void(std::string_view)>;

/// Routes a warning to the installed sink (stderr by default).
void warn(std::string_view message);

/// Installs a sink and returns the previous one. An empty sink silences
/// warnings.
WarningSink set_warning_sink(WarningSink sink);

} // namespace phnls
