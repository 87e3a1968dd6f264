#ifndef CYCDEC_CERTIFICATE_IO_HH
#define CYCDEC_CERTIFICATE_IO_HH

#include <cycdec/packing.hh>

#include <stdexcept>
#include <string>
#include <string_view>

namespace cycdec
{
    class ParseError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    // {"lambda": int, "n": int, "cycles": [[...],...], "matching": [[u,v],...] | null}
    auto to_json(const Packing & p) -> std::string;

    // Throws ParseError on malformed input. The claimed list is read from the
    // optional "lengths" field, falling back to the cycle lengths.
    auto certificate_from_json(std::string_view text) -> Certificate;

    // Cycles as parenthesised tuples, then matching pairs, one per line.
    auto to_text(const Packing & p) -> std::string;
}

#endif
