#pragma once

#include "mcca/cohomology.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace mcca {

struct PassData {
    std::vector<std::uint32_t> columns;
    std::size_t prefix = 0;
    ColumnReduction reduction;
};

/// Memo tables keyed by degree (bases) and (cutoff, degree) otherwise.
/// Values are computed outside the lock and inserted if absent, so concurrent
/// readers may race to compute but always observe a single stored value.
struct ComplexCache {
    std::mutex mutex;
    std::map<int, std::shared_ptr<const DegreeBasis>> bases;
    std::map<std::pair<int, int>, std::shared_ptr<const PassData>> passes;
    std::map<std::pair<int, int>, std::shared_ptr<const detail::CohomologyData>> cohomology;

    template <class Map, class Key, class Make>
    auto get(Map& table, const Key& key, Make&& make) -> typename Map::mapped_type
    {
        {
            std::lock_guard lock(mutex);
            auto it = table.find(key);
            if (it != table.end())
                return it->second;
        }
        auto value = make();
        std::lock_guard lock(mutex);
        return table.try_emplace(key, std::move(value)).first->second;
    }

    /// Drops eliminations and cohomology of degrees below k.
    void release_below(int k)
    {
        std::lock_guard lock(mutex);
        std::erase_if(passes, [k](const auto& e) { return e.first.second < k; });
        std::erase_if(cohomology, [k](const auto& e) { return e.first.second < k; });
    }

    // Bases stay: references to them are handed out.
    void release_eliminations()
    {
        std::lock_guard lock(mutex);
        passes.clear();
        cohomology.clear();
    }
};

}  // namespace mcca
