#include "protolearn/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace protolearn {

namespace {

class Interner {
public:
    Interner() { intern(""); }

    std::uint32_t intern(std::string_view name) {
        {
            std::shared_lock lock(mutex_);
            if (auto it = ids_.find(std::string(name)); it != ids_.end()) {
                return it->second;
            }
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<std::uint32_t>(names_.size()));
        if (inserted) {
            names_.emplace_back(name);
        }
        return it->second;
    }

    const std::string& name(std::uint32_t id) const {
        std::shared_lock lock(mutex_);
        // deque keeps references stable across growth
        return names_[id];
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::deque<std::string> names_;
};

Interner& interner() {
    static Interner instance;
    return instance;
}

}  // namespace

Symbol Symbol::of(std::string_view name) { return Symbol(interner().intern(name)); }

const std::string& Symbol::name() const { return interner().name(id_); }

bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) {
        return a.size() < b.size();
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) {
            continue;
        }
        return a[i].name() < b[i].name();
    }
    return false;
}

Word make_word(std::initializer_list<std::string_view> names) {
    Word w;
    w.reserve(names.size());
    for (auto n : names) {
        w.push_back(Symbol::of(n));
    }
    return w;
}

std::string to_string(const Word& w, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += w[i].name();
    }
    return out;
}

}  // namespace protolearn
