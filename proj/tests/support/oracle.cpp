#include "oracle.hpp"

#include <algorithm>
#include <cstdlib>

namespace fleetcarbon::testing {

std::vector<std::optional<OracleFill>> oracle_interpolate(const std::vector<Estimate>& estimates,
                                                          int peer_count) {
  std::vector<std::optional<OracleFill>> out(estimates.size());
  for (std::size_t g = 0; g < estimates.size(); ++g) {
    if (estimates[g].estimable()) continue;
    const int rank = estimates[g].rank;
    const int half = peer_count / 2;

    std::vector<std::size_t> held;
    for (std::size_t j = 0; j < estimates.size(); ++j) {
      const int d = std::abs(estimates[j].rank - rank);
      if (j != g && d <= half && estimates[j].estimable()) held.push_back(j);
    }
    while (static_cast<int>(held.size()) < peer_count) {
      std::optional<std::size_t> best;
      for (std::size_t j = 0; j < estimates.size(); ++j) {
        if (!estimates[j].estimable()) continue;
        if (std::find(held.begin(), held.end(), j) != held.end()) continue;
        if (!best) {
          best = j;
          continue;
        }
        const int dj = std::abs(estimates[j].rank - rank);
        const int db = std::abs(estimates[*best].rank - rank);
        if (dj < db || (dj == db && estimates[j].rank < estimates[*best].rank)) best = j;
      }
      if (!best) break;
      held.push_back(*best);
    }

    std::sort(held.begin(), held.end(),
              [&](auto a, auto b) { return estimates[a].rank < estimates[b].rank; });
    OracleFill fill;
    double sum = 0.0;
    for (auto j : held) {
      fill.peer_ranks.push_back(estimates[j].rank);
      sum += *estimates[j].value_kg;
    }
    fill.value_kg = sum / static_cast<double>(held.size());
    out[g] = fill;
  }
  return out;
}

}  // namespace fleetcarbon::testing
