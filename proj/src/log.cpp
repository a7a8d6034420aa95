#include "phnls/log.hpp"

#include <iostream>
#include <mutex>

namespace phnls {

namespace {

std::mutex sink_mutex;

WarningSink &sink() {
  static WarningSink s = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return s;
}

} // namespace

void warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(sink_mutex);
  if (sink())
    sink()(message);
}

WarningSink set_warning_sink(WarningSink s) {
  std::lock_guard<std::mutex> lock(sink_mutex);
  auto old = std::move(sink());
  sink() = std::move(s);
  return old;
}

} // namespace phnls
