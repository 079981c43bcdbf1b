#pragma once

#include <algorithm>
#include <array>

namespace acgs {

inline constexpr std::size_t kMaxAgents = 64;

template <class F>
void for_each_joint(const Cgs& g, StateId s, const Restriction* r, F&& f) {
  const std::size_t n = g.num_agents();
  std::array<std::uint32_t, kMaxAgents> lo{}, hi{}, pos{};
  std::array<std::size_t, kMaxAgents> stride{};
  std::size_t base = 0;
  std::size_t acc = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prot = g.protocol(static_cast<AgentId>(i), s);
    stride[i] = acc;
    acc *= prot.size();
    if (r != nullptr && r->fixed[i][s] >= 0) {
      auto it = std::lower_bound(prot.begin(), prot.end(), static_cast<ActionId>(r->fixed[i][s]));
      if (it == prot.end() || *it != static_cast<ActionId>(r->fixed[i][s])) return;
      lo[i] = hi[i] = static_cast<std::uint32_t>(it - prot.begin());
    } else {
      lo[i] = 0;
      hi[i] = static_cast<std::uint32_t>(prot.size() - 1);
    }
    pos[i] = lo[i];
    base += pos[i] * stride[i];
  }
  std::size_t index = base;
  while (true) {
    f(index, g.target(s, index));
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (pos[i] < hi[i]) {
        ++pos[i];
        index += stride[i];
        break;
      }
      index -= (pos[i] - lo[i]) * stride[i];
      pos[i] = lo[i];
    }
    if (i == n) break;
  }
}

}  // namespace acgs
