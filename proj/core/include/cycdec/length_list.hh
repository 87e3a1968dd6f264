#ifndef CYCDEC_LENGTH_LIST_HH
#define CYCDEC_LENGTH_LIST_HH

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cycdec
{
    // Multiset of cycle lengths, stored non-increasing.
    class LengthList
    {
        public:
            LengthList() = default;
            LengthList(std::initializer_list<int> values);
            explicit LengthList(std::vector<int> values);

            static auto repeated(int length, int count) -> LengthList;

            // Comma separated, e.g. "5,5,2". Empty string is the empty list.
            static auto parse(std::string_view text) -> LengthList;

            auto values() const -> std::span<const int> { return _values; }
            auto size() const -> int { return static_cast<int>(_values.size()); }
            auto empty() const -> bool { return _values.empty(); }
            auto sum() const -> long;
            auto max() const -> int { return _values.empty() ? 0 : _values.front(); }
            auto min() const -> int { return _values.empty() ? 0 : _values.back(); }

            // Number of occurrences of m.
            auto nu(int m) const -> int;

            auto contains(const LengthList & sub) const -> bool;

            auto operator+(const LengthList & other) const -> LengthList;

            // Multiset difference; throws std::invalid_argument unless other is a sublist.
            auto operator-(const LengthList & other) const -> LengthList;

            // The total order of the reduction: more entries, or equal count and
            // lexicographically larger in non-increasing order.
            auto larger_than(const LengthList & other) const -> bool;

            auto to_string() const -> std::string;

            auto operator==(const LengthList &) const -> bool = default;
            auto operator<(const LengthList & other) const -> bool { return _values < other._values; }

        private:
            std::vector<int> _values;
    };
}

#endif
