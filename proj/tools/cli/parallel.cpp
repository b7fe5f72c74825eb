#include "parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tpb::cli {

int worker_count() {
  const char* env = std::getenv("TPB_WORKERS");
  if (env == nullptr || *env == '\0') {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  const std::string s(env);
  int n = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n < 1) {
    throw std::invalid_argument("TPB_WORKERS must be a positive integer, got '" + s + "'");
  }
  return n;
}

}  // namespace tpb::cli
