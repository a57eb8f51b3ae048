#include "protolearn/sul.hpp"

#include "protolearn/errors.hpp"

namespace protolearn {

SulSession::SulSession(std::shared_ptr<const MealyMachine> model, bool with_cache) : model_(std::move(model)) {
    if (!model_) {
        throw InvalidArgument("SUL session needs a model");
    }
    if (with_cache) {
        enable_cache();
    }
}

const std::vector<Symbol>& SulSession::alphabet() const { return model_->inputs(); }

Word SulSession::output_query(const Word& inputs) {
    Word out = run(*model_, inputs);
    ++stats_.queries;
    stats_.steps += inputs.size();
    executed_.emplace_back(inputs, out);
    return out;
}

Word SulSession::cached_query(const Word& inputs) {
    if (!cache_) {
        throw InvalidArgument("cached_query on a session without cache");
    }
    if (auto hit = cache_->lookup(inputs)) {
        ++stats_.cache_hits;
        return *hit;
    }
    Word out = output_query(inputs);
    cache_->insert(Trace(inputs, out));
    return out;
}

void SulSession::enable_cache() {
    if (!cache_) {
        cache_.emplace(model_->inputs());
    }
}

std::size_t SulSession::prime_cache(std::span<const Trace> traces) {
    enable_cache();
    for (const auto& t : traces) {
        cache_->insert(t);
    }
    return cache_->size();
}

}  // namespace protolearn
