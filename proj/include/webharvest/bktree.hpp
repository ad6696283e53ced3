#pragma once

#include <cstdint>
#include <vector>

namespace webharvest {

// BK-tree over 64-bit hashes under Hamming distance. Insert is single-writer;
// queries against a frozen tree are safe from multiple threads.
class BkTree {
public:
    void insert(std::uint64_t hash, std::uint32_t id);

    // Ids of all inserted entries with hamming(hash, query) <= radius,
    // unordered.
    std::vector<std::uint32_t> within(std::uint64_t query, int radius) const;

    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return count_; }

private:
    struct Node {
        std::uint64_t hash;
        std::vector<std::uint32_t> ids; // entries with exactly this hash
        // children keyed by distance to this node, 1..64
        std::vector<std::pair<std::uint8_t, std::uint32_t>> children;
    };
    std::vector<Node> nodes_;
    std::size_t count_ = 0;
};

} // namespace webharvest
