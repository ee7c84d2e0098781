#pragma once

#include <sstream>
#include <utility>
#include <vector>

#include "bvtn/errors.hpp"

namespace bvtn {

/// Strictly increasing nodes inside (0,1).  With l+1 nodes the generated
/// collocation matrix has l+1 rows; the basis degree n (n <= l) picks the
/// column count n+1.
template <class T>
class NodeSet {
public:
    static NodeSet validate(std::vector<T> raw) {
        if (raw.empty()) throw EmptyNodes();
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (!(raw[i] > T(0)) || !(raw[i] < T(1))) {
                std::ostringstream os;
                os << "node " << i + 1 << " lies outside the open interval (0,1)";
                throw OutOfRange(os.str());
            }
            if (i > 0 && !(raw[i - 1] < raw[i])) {
                std::ostringstream os;
                os << "nodes " << i << " and " << i + 1 << " are not strictly increasing";
                throw NonMonotonic(os.str());
            }
        }
        return NodeSet(std::move(raw));
    }

    int l() const { return static_cast<int>(nodes_.size()) - 1; }
    int count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<T>& values() const { return nodes_; }
    const T& operator[](int i) const { return nodes_[i]; }

    /// Same nodes in another scalar type (e.g. rational -> BigFloat).
    template <class U>
    NodeSet<U> cast() const {
        std::vector<U> out;
        out.reserve(nodes_.size());
        for (const T& x : nodes_) out.emplace_back(x);
        return NodeSet<U>::validate(std::move(out));
    }

private:
    explicit NodeSet(std::vector<T> nodes) : nodes_(std::move(nodes)) {}
    std::vector<T> nodes_;
};

template <class T>
NodeSet<T> validate_nodes(std::vector<T> raw) {
    return NodeSet<T>::validate(std::move(raw));
}

} // namespace bvtn
