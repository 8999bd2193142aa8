#ifndef NBX_IPQ_HPP
#define NBX_IPQ_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nbx {

/// Indexed max-priority queue over integer keys 0..n-1: a binary max-heap
/// with a position index so any key can be updated in O(log n). Ties broken
/// by the smaller key, so peek/pop are deterministic.
class IndexedPriorityQueue {
public:
    IndexedPriorityQueue() = default;

    /// Heapifies all keys 0..scores.size()-1 in O(n).
    explicit IndexedPriorityQueue(std::span<const double> scores) {
        const auto n = scores.size();
        heap_.resize(n);
        pos_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            heap_[i] = {scores[i], static_cast<std::int32_t>(i)};
            pos_[i] = static_cast<std::int32_t>(i);
        }
        for (std::size_t i = n; i-- > 0;) sift_down(i);
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    bool contains(std::int32_t key) const {
        return key >= 0 && static_cast<std::size_t>(key) < pos_.size() && pos_[static_cast<std::size_t>(key)] >= 0;
    }

    std::pair<std::int32_t, double> peek() const {
        if (heap_.empty()) throw std::out_of_range("queue is empty");
        return {heap_[0].key, heap_[0].score};
    }

    std::pair<std::int32_t, double> pop() {
        auto top = peek();
        swap_entries(0, heap_.size() - 1);
        pos_[static_cast<std::size_t>(heap_.back().key)] = -1;
        heap_.pop_back();
        if (!heap_.empty()) sift_down(0);
        return top;
    }

    void update(std::int32_t key, double score) {
        if (!contains(key)) throw std::out_of_range("key not in queue");
        const auto at = static_cast<std::size_t>(pos_[static_cast<std::size_t>(key)]);
        const double old = heap_[at].score;
        heap_[at].score = score;
        if (score > old)
            sift_up(at);
        else if (score < old)
            sift_down(at);
    }

    double score_of(std::int32_t key) const {
        if (!contains(key)) throw std::out_of_range("key not in queue");
        return heap_[static_cast<std::size_t>(pos_[static_cast<std::size_t>(key)])].score;
    }

private:
    struct Entry {
        double score;
        std::int32_t key;
    };

    // a wins over b when it should sit closer to the top
    static bool wins(const Entry& a, const Entry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.key < b.key;
    }

    void swap_entries(std::size_t i, std::size_t j) {
        std::swap(heap_[i], heap_[j]);
        pos_[static_cast<std::size_t>(heap_[i].key)] = static_cast<std::int32_t>(i);
        pos_[static_cast<std::size_t>(heap_[j].key)] = static_cast<std::int32_t>(j);
    }

    void sift_up(std::size_t i) {
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!wins(heap_[i], heap_[parent])) break;
            swap_entries(i, parent);
            i = parent;
        }
    }

    void sift_down(std::size_t i) {
        const std::size_t n = heap_.size();
        while (true) {
            std::size_t best = i;
            const std::size_t left = 2 * i + 1, right = 2 * i + 2;
            if (left < n && wins(heap_[left], heap_[best])) best = left;
            if (right < n && wins(heap_[right], heap_[best])) best = right;
            if (best == i) break;
            swap_entries(i, best);
            i = best;
        }
    }

    std::vector<Entry> heap_;
    std::vector<std::int32_t> pos_;  // key -> heap slot, -1 when absent
};

}  // namespace nbx

#endif
