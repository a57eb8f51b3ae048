#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace protolearn {

// Interned symbol name. Equality is id equality; ordering for tie-breaks
// must go through by_name, never through the raw id.
class Symbol {
public:
    Symbol() = default;

    static Symbol of(std::string_view name);

    std::uint32_t id() const { return id_; }
    const std::string& name() const;

    friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }

private:
    explicit Symbol(std::uint32_t id) : id_(id) {}
    std::uint32_t id_{0};
};

// Byte order of the symbol names.
struct by_name {
    bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
};

using Word = std::vector<Symbol>;

// Shortlex order on words (length first, then symbol names).
bool shortlex_less(const Word& a, const Word& b);

Word make_word(std::initializer_list<std::string_view> names);
std::string to_string(const Word& w, std::string_view sep = " ");

}  // namespace protolearn

template <>
struct std::hash<protolearn::Symbol> {
    std::size_t operator()(protolearn::Symbol s) const noexcept { return s.id(); }
};

template <>
struct std::hash<protolearn::Word> {
    std::size_t operator()(const protolearn::Word& w) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto s : w) {
            h ^= s.id() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};
