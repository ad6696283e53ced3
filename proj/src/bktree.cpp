#include "webharvest/bktree.hpp"

#include "webharvest/phash.hpp"

namespace webharvest {

void BkTree::insert(std::uint64_t hash, std::uint32_t id) {
    ++count_;
    if (nodes_.empty()) {
        nodes_.push_back(Node{hash, {id}, {}});
        return;
    }
    std::uint32_t cur = 0;
    for (;;) {
        Node& node = nodes_[cur];
        const int d = hamming(hash, node.hash);
        if (d == 0) {
            node.ids.push_back(id);
            return;
        }
        std::uint32_t next = 0;
        bool found = false;
        for (const auto& [dist, child] : node.children) {
            if (dist == d) {
                next = child;
                found = true;
                break;
            }
        }
        if (!found) {
            const auto child = static_cast<std::uint32_t>(nodes_.size());
            nodes_[cur].children.emplace_back(static_cast<std::uint8_t>(d), child);
            nodes_.push_back(Node{hash, {id}, {}});
            return;
        }
        cur = next;
    }
}

std::vector<std::uint32_t> BkTree::within(std::uint64_t query, int radius) const {
    std::vector<std::uint32_t> out;
    if (nodes_.empty()) return out;
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        const int d = hamming(query, node.hash);
        if (d <= radius) out.insert(out.end(), node.ids.begin(), node.ids.end());
        const int lo = d - radius;
        const int hi = d + radius;
        for (const auto& [dist, child] : node.children) {
            if (dist >= lo && dist <= hi) stack.push_back(child);
        }
    }
    return out;
}

} // namespace webharvest
