#include "collonet/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace collonet {

std::size_t thread_count() {
  if (const char* env = std::getenv("COLLONET_THREADS")) {
    std::size_t value = 0;
    const auto res = std::from_chars(env, env + std::strlen(env), value);
    if (res.ec == std::errc{} && value > 0) return value;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace collonet
