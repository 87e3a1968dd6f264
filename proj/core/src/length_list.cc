#include <cycdec/length_list.hh>

#include <algorithm>
#include <charconv>
#include <functional>
#include <stdexcept>

using std::invalid_argument;
using std::string;
using std::string_view;
using std::vector;

namespace cycdec
{
    LengthList::LengthList(std::initializer_list<int> values) :
        LengthList(vector<int>(values))
    {
    }

    LengthList::LengthList(vector<int> values) :
        _values(std::move(values))
    {
        std::sort(_values.begin(), _values.end(), std::greater<>());
    }

    auto LengthList::repeated(int length, int count) -> LengthList
    {
        return LengthList(vector<int>(std::max(count, 0), length));
    }

    auto LengthList::parse(string_view text) -> LengthList
    {
        vector<int> values;
        while (! text.empty() && (text.front() == ' ' || text.front() == '('))
            text.remove_prefix(1);
        while (! text.empty() && (text.back() == ' ' || text.back() == ')'))
            text.remove_suffix(1);
        if (text.empty())
            return LengthList{};
        while (true) {
            auto comma = text.find(',');
            auto token = text.substr(0, comma);
            while (! token.empty() && token.front() == ' ')
                token.remove_prefix(1);
            while (! token.empty() && token.back() == ' ')
                token.remove_suffix(1);
            int value = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
                throw invalid_argument("malformed length list entry '" + string(token) + "'");
            values.push_back(value);
            if (comma == string_view::npos)
                break;
            text.remove_prefix(comma + 1);
        }
        return LengthList(std::move(values));
    }

    auto LengthList::sum() const -> long
    {
        long s = 0;
        for (int v : _values)
            s += v;
        return s;
    }

    auto LengthList::nu(int m) const -> int
    {
        return static_cast<int>(std::count(_values.begin(), _values.end(), m));
    }

    auto LengthList::contains(const LengthList & sub) const -> bool
    {
        // both sorted non-increasing
        return std::includes(_values.begin(), _values.end(), sub._values.begin(), sub._values.end(), std::greater<>());
    }

    auto LengthList::operator+(const LengthList & other) const -> LengthList
    {
        vector<int> merged;
        merged.reserve(_values.size() + other._values.size());
        std::merge(_values.begin(), _values.end(), other._values.begin(), other._values.end(),
                std::back_inserter(merged), std::greater<>());
        LengthList result;
        result._values = std::move(merged);
        return result;
    }

    auto LengthList::operator-(const LengthList & other) const -> LengthList
    {
        if (! contains(other))
            throw invalid_argument(other.to_string() + " is not a sublist of " + to_string());
        vector<int> diff;
        std::set_difference(_values.begin(), _values.end(), other._values.begin(), other._values.end(),
                std::back_inserter(diff), std::greater<>());
        LengthList result;
        result._values = std::move(diff);
        return result;
    }

    auto LengthList::larger_than(const LengthList & other) const -> bool
    {
        if (size() != other.size())
            return size() > other.size();
        return std::lexicographical_compare(other._values.begin(), other._values.end(), _values.begin(), _values.end());
    }

    auto LengthList::to_string() const -> string
    {
        string s = "(";
        for (std::size_t i = 0 ; i < _values.size() ; ++i) {
            if (i > 0)
                s += ",";
            s += std::to_string(_values[i]);
        }
        return s + ")";
    }
}
