#pragma once

#include <numeric>
#include <vector>

namespace kpeaks {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), rank_(n, 0), components_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns true when x and y were in different components.
    bool unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (rank_[x] < rank_[y]) std::swap(x, y);
        parent_[y] = x;
        if (rank_[x] == rank_[y]) ++rank_[x];
        --components_;
        return true;
    }

    bool same(int x, int y) { return find(x) == find(y); }
    int components() const { return components_; }
    int size() const { return static_cast<int>(parent_.size()); }

    // Canonical labeling: each node mapped to the smallest node index in its
    // component. Lets two structures be compared for identical connectivity.
    std::vector<int> canonical_labels() {
        const int n = size();
        std::vector<int> min_of(n, n);
        for (int i = 0; i < n; ++i) {
            int r = find(i);
            if (i < min_of[r]) min_of[r] = i;
        }
        std::vector<int> label(n);
        for (int i = 0; i < n; ++i) label[i] = min_of[find(i)];
        return label;
    }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
    int components_;
};

}  // namespace kpeaks
