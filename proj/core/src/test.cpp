#include "efftree/test.hpp"

#include <atomic>

namespace efftree {

MapTag fresh_map_tag() {
  static std::atomic<std::uint64_t> counter{0};
  return {"anon#" + std::to_string(counter.fetch_add(1)), false};
}

}  // namespace efftree
